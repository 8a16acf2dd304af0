#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace skp {

using ElementId = std::uint32_t;

// Marginal gains smaller than this in magnitude are floating-point noise and
// are clamped to zero before they reach any bound or pruning decision.
inline constexpr double kGainEpsilon = 1e-12;

inline double clamp_gain(double g) { return g > 0.0 ? g : 0.0; }

// Evaluation contract for a normalized (f(empty) = 0) monotone submodular set
// function over a dense universe {0, ..., n-1}.
//
// Two query modes:
//   - evaluate(S): stateless, from scratch, order-independent (input is sorted
//     and deduplicated internally, accumulation runs in ascending id order).
//   - anchored mode: fix a base set incrementally via anchor_push/anchor_pop
//     and query anchor_gain(e) = f(e | base) cheaply. The base class provides
//     a fallback built on evaluate(); concrete oracles override with
//     per-family incremental state (coverage counters, survival products,
//     per-customer maxima).
//
// Problem data is immutable after construction; the anchored state is mutable
// and single-owner (one solver per oracle instance at a time).
class SubmodularOracle {
public:
    virtual ~SubmodularOracle() = default;

    virtual std::size_t universe_size() const = 0;

    // True when f maps every set to an exactly representable integer, which
    // lets callers compare objective values without tolerances.
    virtual bool integral_valued() const = 0;

    virtual double evaluate(std::span<const ElementId> set) const = 0;

    virtual void anchor_clear();
    virtual void anchor_push(ElementId e);
    virtual void anchor_pop();
    virtual double anchor_value() const;
    virtual double anchor_gain(ElementId e) const;

    virtual std::size_t anchor_depth() const { return anchor_stack_.size(); }
    virtual std::span<const ElementId> anchor_set() const { return anchor_stack_; }
    virtual bool anchor_contains(ElementId e) const { return anchor_member_[e] != 0; }

protected:
    // Concrete oracles must call this (directly or via anchor_clear) from
    // their constructor before any anchored query.
    void init_anchor_bookkeeping(std::size_t n);
    void check_element(ElementId e) const;

    // Shared membership bookkeeping; derived classes call these from their
    // overrides instead of reimplementing the stack.
    void record_push(ElementId e);
    ElementId record_pop();

private:
    std::vector<ElementId> anchor_stack_;
    std::vector<std::uint8_t> anchor_member_;
    // Fallback state for the evaluate()-based default implementation.
    mutable double fallback_value_ = 0.0;
};

// f(e|S) = f(S u {e}) - f(S), clamped at zero. Two evaluate() calls.
double marginal_gain(const SubmodularOracle& oracle, ElementId e,
                     std::span<const ElementId> set);

// Weighted coverage: evaluate(S) = sum of item values covered by U_{j in S} C_j.
std::unique_ptr<SubmodularOracle> make_cov(std::size_t item_count,
                                           std::vector<double> item_values,
                                           std::vector<std::vector<std::uint32_t>> sets);

// Bipartite influence: evaluate(S) = sum_i (1 - prod_{j in S} (1 - p_ij)).
struct InfEdge {
    std::uint32_t source = 0;
    std::uint32_t target = 0;
    double probability = 0.0;
};
std::unique_ptr<SubmodularOracle> make_inf(std::size_t source_count,
                                           std::size_t target_count,
                                           std::span<const InfEdge> edges);

// Facility location: evaluate(S) = sum_i max_{j in S} v_ij (empty max is 0).
// profits is row-major, customer-by-facility: profits[i * n + j].
std::unique_ptr<SubmodularOracle> make_loc(std::size_t facility_count,
                                           std::size_t customer_count,
                                           std::vector<double> profits);

// Partial domination: evaluate(S) = |U_{v in S} N[v]|. Self-loops and
// duplicate edges are normalized away at construction.
std::unique_ptr<SubmodularOracle> make_dom(std::size_t vertex_count,
                                           std::span<const std::pair<std::uint32_t, std::uint32_t>> edges);

// Transparent call-count instrumentation. Each evaluate() and each
// anchor_gain() forwarded to the inner oracle counts as one call; a
// marginal_gain() helper therefore costs two. Wrapping never changes values.
class CountingOracle final : public SubmodularOracle {
public:
    explicit CountingOracle(SubmodularOracle& inner) : inner_(&inner) {}

    std::size_t universe_size() const override { return inner_->universe_size(); }
    bool integral_valued() const override { return inner_->integral_valued(); }

    double evaluate(std::span<const ElementId> set) const override {
        ++calls_;
        return inner_->evaluate(set);
    }

    void anchor_clear() override { inner_->anchor_clear(); }
    void anchor_push(ElementId e) override { inner_->anchor_push(e); }
    void anchor_pop() override { inner_->anchor_pop(); }
    double anchor_value() const override { return inner_->anchor_value(); }
    double anchor_gain(ElementId e) const override {
        ++calls_;
        return inner_->anchor_gain(e);
    }
    std::size_t anchor_depth() const override { return inner_->anchor_depth(); }
    std::span<const ElementId> anchor_set() const override { return inner_->anchor_set(); }
    bool anchor_contains(ElementId e) const override { return inner_->anchor_contains(e); }

    std::uint64_t call_count() const { return calls_; }
    void reset_count() { calls_ = 0; }

private:
    SubmodularOracle* inner_;
    mutable std::uint64_t calls_ = 0;
};

// Shifts an oracle with f(empty) != 0 so downstream code can assume
// normalization. The four built-in families are normalized by construction;
// this adapter exists for externally supplied functions.
class NormalizedOracle final : public SubmodularOracle {
public:
    explicit NormalizedOracle(std::unique_ptr<SubmodularOracle> inner);

    std::size_t universe_size() const override { return inner_->universe_size(); }
    bool integral_valued() const override { return inner_->integral_valued(); }
    double evaluate(std::span<const ElementId> set) const override {
        return inner_->evaluate(set) - offset_;
    }

    void anchor_clear() override { inner_->anchor_clear(); }
    void anchor_push(ElementId e) override { inner_->anchor_push(e); }
    void anchor_pop() override { inner_->anchor_pop(); }
    double anchor_value() const override { return inner_->anchor_value() - offset_; }
    double anchor_gain(ElementId e) const override { return inner_->anchor_gain(e); }
    std::size_t anchor_depth() const override { return inner_->anchor_depth(); }
    std::span<const ElementId> anchor_set() const override { return inner_->anchor_set(); }
    bool anchor_contains(ElementId e) const override { return inner_->anchor_contains(e); }

    double offset() const { return offset_; }

private:
    std::unique_ptr<SubmodularOracle> inner_;
    double offset_ = 0.0;
};

}  // namespace skp
