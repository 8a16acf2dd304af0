#include "skp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace skp {

namespace {

// Sorted, deduplicated, range-checked copy of a caller-supplied set.
std::vector<ElementId> canonical_set(std::span<const ElementId> set, std::size_t n) {
    std::vector<ElementId> s(set.begin(), set.end());
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (!s.empty() && s.back() >= n) {
        throw std::out_of_range("element id " + std::to_string(s.back()) +
                                " outside universe of size " + std::to_string(n));
    }
    return s;
}

bool all_integral(std::span<const double> values) {
    for (double v : values) {
        if (!(std::isfinite(v) && v == std::floor(v) && std::abs(v) < 0x1.0p53)) return false;
    }
    return true;
}

}  // namespace

void SubmodularOracle::init_anchor_bookkeeping(std::size_t n) {
    anchor_stack_.clear();
    anchor_stack_.reserve(n);
    anchor_member_.assign(n, 0);
    fallback_value_ = 0.0;
}

void SubmodularOracle::check_element(ElementId e) const {
    if (e >= universe_size()) {
        throw std::out_of_range("element id " + std::to_string(e) +
                                " outside universe of size " +
                                std::to_string(universe_size()));
    }
}

void SubmodularOracle::record_push(ElementId e) {
    check_element(e);
    if (anchor_member_[e]) {
        throw std::invalid_argument("element " + std::to_string(e) +
                                    " already in the anchored base");
    }
    anchor_member_[e] = 1;
    anchor_stack_.push_back(e);
}

ElementId SubmodularOracle::record_pop() {
    if (anchor_stack_.empty()) throw std::logic_error("anchor_pop on empty base");
    const ElementId e = anchor_stack_.back();
    anchor_stack_.pop_back();
    anchor_member_[e] = 0;
    return e;
}

void SubmodularOracle::anchor_clear() {
    init_anchor_bookkeeping(universe_size());
    fallback_value_ = evaluate({});
}

void SubmodularOracle::anchor_push(ElementId e) {
    record_push(e);
    fallback_value_ = evaluate(anchor_stack_);
}

void SubmodularOracle::anchor_pop() {
    record_pop();
    fallback_value_ = evaluate(anchor_stack_);
}

double SubmodularOracle::anchor_value() const { return fallback_value_; }

double SubmodularOracle::anchor_gain(ElementId e) const {
    check_element(e);
    if (anchor_member_[e]) return 0.0;
    std::vector<ElementId> with(anchor_stack_.begin(), anchor_stack_.end());
    with.push_back(e);
    return clamp_gain(evaluate(with) - fallback_value_);
}

double marginal_gain(const SubmodularOracle& oracle, ElementId e,
                     std::span<const ElementId> set) {
    if (e >= oracle.universe_size()) {
        throw std::out_of_range("element id " + std::to_string(e) +
                                " outside universe of size " +
                                std::to_string(oracle.universe_size()));
    }
    for (ElementId x : set) {
        if (x == e) return 0.0;
    }
    std::vector<ElementId> with(set.begin(), set.end());
    with.push_back(e);
    return clamp_gain(oracle.evaluate(with) - oracle.evaluate(set));
}

// ---------------------------------------------------------------------------
// Weighted coverage (also backs partial domination with unit values).

class CovOracle final : public SubmodularOracle {
public:
    CovOracle(std::size_t item_count, std::vector<double> values,
              std::vector<std::vector<std::uint32_t>> sets)
        : m_(item_count), values_(std::move(values)), sets_(std::move(sets)) {
        if (values_.size() != m_) {
            throw std::invalid_argument("expected one value per item");
        }
        for (double v : values_) {
            if (!(v >= 0.0) || !std::isfinite(v)) {
                throw std::invalid_argument("item values must be nonnegative finite");
            }
        }
        for (auto& s : sets_) {
            std::sort(s.begin(), s.end());
            s.erase(std::unique(s.begin(), s.end()), s.end());
            for (std::uint32_t i : s) {
                if (i >= m_) {
                    throw std::out_of_range("item index " + std::to_string(i) +
                                            " outside item range of size " +
                                            std::to_string(m_));
                }
            }
        }
        integral_ = all_integral(values_);
        init_anchor_bookkeeping(sets_.size());
        reset_state();
    }

    std::size_t universe_size() const override { return sets_.size(); }
    bool integral_valued() const override { return integral_; }

    double evaluate(std::span<const ElementId> set) const override {
        const auto s = canonical_set(set, sets_.size());
        std::vector<std::uint8_t> covered(m_, 0);
        for (ElementId e : s) {
            for (std::uint32_t i : sets_[e]) covered[i] = 1;
        }
        double total = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (covered[i]) total += values_[i];
        }
        return total;
    }

    void anchor_clear() override {
        init_anchor_bookkeeping(sets_.size());
        reset_state();
    }

    void anchor_push(ElementId e) override {
        record_push(e);
        for (std::uint32_t i : sets_[e]) {
            if (count_[i]++ == 0) value_ += values_[i];
        }
    }

    void anchor_pop() override {
        const ElementId e = record_pop();
        for (std::uint32_t i : sets_[e]) {
            if (--count_[i] == 0) value_ -= values_[i];
        }
    }

    double anchor_value() const override { return value_; }

    double anchor_gain(ElementId e) const override {
        check_element(e);
        if (anchor_contains(e)) return 0.0;
        double g = 0.0;
        for (std::uint32_t i : sets_[e]) {
            if (count_[i] == 0) g += values_[i];
        }
        return g;
    }

private:
    void reset_state() {
        count_.assign(m_, 0);
        value_ = 0.0;
    }

    std::size_t m_;
    std::vector<double> values_;
    std::vector<std::vector<std::uint32_t>> sets_;
    bool integral_ = false;
    std::vector<std::uint32_t> count_;
    double value_ = 0.0;
};

std::unique_ptr<SubmodularOracle> make_cov(std::size_t item_count,
                                           std::vector<double> item_values,
                                           std::vector<std::vector<std::uint32_t>> sets) {
    return std::make_unique<CovOracle>(item_count, std::move(item_values), std::move(sets));
}

std::unique_ptr<SubmodularOracle> make_dom(
    std::size_t vertex_count,
    std::span<const std::pair<std::uint32_t, std::uint32_t>> edges) {
    std::vector<std::vector<std::uint32_t>> closed(vertex_count);
    for (std::size_t v = 0; v < vertex_count; ++v) {
        closed[v].push_back(static_cast<std::uint32_t>(v));
    }
    for (const auto& [u, v] : edges) {
        if (u >= vertex_count || v >= vertex_count) {
            throw std::out_of_range("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                                    ") outside vertex range of size " +
                                    std::to_string(vertex_count));
        }
        if (u == v) continue;  // self-loop, normalized away
        closed[u].push_back(v);
        closed[v].push_back(u);
    }
    return std::make_unique<CovOracle>(vertex_count,
                                       std::vector<double>(vertex_count, 1.0),
                                       std::move(closed));
}

// ---------------------------------------------------------------------------
// Bipartite influence.

class InfOracle final : public SubmodularOracle {
public:
    InfOracle(std::size_t n, std::size_t m, std::span<const InfEdge> edges)
        : n_(n), m_(m), adjacency_(n) {
        for (const InfEdge& edge : edges) {
            if (edge.source >= n || edge.target >= m) {
                throw std::out_of_range("edge (" + std::to_string(edge.source) + ", " +
                                        std::to_string(edge.target) + ") out of range");
            }
            if (!(edge.probability >= 0.0 && edge.probability <= 1.0)) {
                throw std::invalid_argument(
                    "probability " + std::to_string(edge.probability) + " on edge (" +
                    std::to_string(edge.source) + ", " + std::to_string(edge.target) +
                    ") outside [0, 1]");
            }
            adjacency_[edge.source].push_back({edge.target, edge.probability});
        }
        // Ascending target order within a source keeps evaluate() accumulation
        // independent of input edge order.
        for (auto& adj : adjacency_) {
            std::sort(adj.begin(), adj.end(),
                      [](const Arc& a, const Arc& b) { return a.target < b.target; });
        }
        init_anchor_bookkeeping(n_);
        reset_state();
    }

    std::size_t universe_size() const override { return n_; }
    bool integral_valued() const override { return false; }

    // Survival products are multiplied in ascending source-id order.
    double evaluate(std::span<const ElementId> set) const override {
        const auto s = canonical_set(set, n_);
        std::vector<double> survival(m_, 1.0);
        for (ElementId e : s) {
            for (const Arc& a : adjacency_[e]) survival[a.target] *= 1.0 - a.probability;
        }
        double total = 0.0;
        for (std::size_t i = 0; i < m_; ++i) total += 1.0 - survival[i];
        return total;
    }

    void anchor_clear() override {
        init_anchor_bookkeeping(n_);
        reset_state();
    }

    void anchor_push(ElementId e) override {
        record_push(e);
        undo_.push_back({undo_entries_.size(), value_});
        for (const Arc& a : adjacency_[e]) {
            undo_entries_.push_back({a.target, survival_[a.target]});
            const double gained = survival_[a.target] * a.probability;
            survival_[a.target] -= gained;
            value_ += gained;
        }
    }

    void anchor_pop() override {
        record_pop();
        const Undo u = undo_.back();
        undo_.pop_back();
        while (undo_entries_.size() > u.entries_mark) {
            survival_[undo_entries_.back().target] = undo_entries_.back().survival;
            undo_entries_.pop_back();
        }
        value_ = u.value;  // exact restore, no division drift
    }

    double anchor_value() const override { return value_; }

    double anchor_gain(ElementId e) const override {
        check_element(e);
        if (anchor_contains(e)) return 0.0;
        double g = 0.0;
        for (const Arc& a : adjacency_[e]) g += survival_[a.target] * a.probability;
        return g;
    }

private:
    struct Arc {
        std::uint32_t target;
        double probability;
    };
    struct SurvivalEntry {
        std::uint32_t target;
        double survival;
    };
    struct Undo {
        std::size_t entries_mark;
        double value;
    };

    void reset_state() {
        survival_.assign(m_, 1.0);
        value_ = 0.0;
        undo_.clear();
        undo_entries_.clear();
    }

    std::size_t n_;
    std::size_t m_;
    std::vector<std::vector<Arc>> adjacency_;
    std::vector<double> survival_;
    double value_ = 0.0;
    std::vector<Undo> undo_;
    std::vector<SurvivalEntry> undo_entries_;
};

std::unique_ptr<SubmodularOracle> make_inf(std::size_t source_count,
                                           std::size_t target_count,
                                           std::span<const InfEdge> edges) {
    return std::make_unique<InfOracle>(source_count, target_count, edges);
}

// ---------------------------------------------------------------------------
// Facility location.

class LocOracle final : public SubmodularOracle {
public:
    LocOracle(std::size_t n, std::size_t m, std::vector<double> profits)
        : n_(n), m_(m), profits_(std::move(profits)) {
        if (profits_.size() != n_ * m_) {
            throw std::invalid_argument("profit matrix must be customers x facilities");
        }
        for (double v : profits_) {
            if (!(v >= 0.0) || !std::isfinite(v)) {
                // Negative profits would break monotonicity of the max-assignment.
                throw std::invalid_argument("profits must be nonnegative finite");
            }
        }
        integral_ = all_integral(profits_);
        init_anchor_bookkeeping(n_);
        reset_state();
    }

    std::size_t universe_size() const override { return n_; }
    bool integral_valued() const override { return integral_; }

    double evaluate(std::span<const ElementId> set) const override {
        const auto s = canonical_set(set, n_);
        double total = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            double best = 0.0;
            for (ElementId e : s) best = std::max(best, profit(i, e));
            total += best;
        }
        return total;
    }

    void anchor_clear() override {
        init_anchor_bookkeeping(n_);
        reset_state();
    }

    void anchor_push(ElementId e) override {
        record_push(e);
        undo_.push_back({undo_entries_.size(), value_});
        for (std::size_t i = 0; i < m_; ++i) {
            const double v = profit(i, e);
            if (v > best_[i]) {
                undo_entries_.push_back({static_cast<std::uint32_t>(i), best_[i]});
                value_ += v - best_[i];
                best_[i] = v;
            }
        }
    }

    void anchor_pop() override {
        record_pop();
        const Undo u = undo_.back();
        undo_.pop_back();
        while (undo_entries_.size() > u.entries_mark) {
            best_[undo_entries_.back().customer] = undo_entries_.back().best;
            undo_entries_.pop_back();
        }
        value_ = u.value;
    }

    double anchor_value() const override { return value_; }

    double anchor_gain(ElementId e) const override {
        check_element(e);
        if (anchor_contains(e)) return 0.0;
        double g = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            const double v = profit(i, e);
            if (v > best_[i]) g += v - best_[i];
        }
        return g;
    }

private:
    struct BestEntry {
        std::uint32_t customer;
        double best;
    };
    struct Undo {
        std::size_t entries_mark;
        double value;
    };

    double profit(std::size_t customer, std::size_t facility) const {
        return profits_[customer * n_ + facility];
    }

    void reset_state() {
        best_.assign(m_, 0.0);
        value_ = 0.0;
        undo_.clear();
        undo_entries_.clear();
    }

    std::size_t n_;
    std::size_t m_;
    std::vector<double> profits_;
    bool integral_ = false;
    std::vector<double> best_;
    double value_ = 0.0;
    std::vector<Undo> undo_;
    std::vector<BestEntry> undo_entries_;
};

std::unique_ptr<SubmodularOracle> make_loc(std::size_t facility_count,
                                           std::size_t customer_count,
                                           std::vector<double> profits) {
    return std::make_unique<LocOracle>(facility_count, customer_count, std::move(profits));
}

// ---------------------------------------------------------------------------

NormalizedOracle::NormalizedOracle(std::unique_ptr<SubmodularOracle> inner)
    : inner_(std::move(inner)) {
    offset_ = inner_->evaluate({});
}

}  // namespace skp
