#include "skp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "skp/rng.hpp"

namespace skp {

const char* to_string(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::cov: return "COV";
        case ProblemKind::inf: return "INF";
        case ProblemKind::loc: return "LOC";
        case ProblemKind::dom: return "DOM";
    }
    return "?";
}

const char* to_string(WeightScheme scheme) {
    switch (scheme) {
        case WeightScheme::normal: return "normal";
        case WeightScheme::uniform: return "uniform";
        case WeightScheme::unit: return "unit";
        case WeightScheme::explicit_weights: return "explicit";
    }
    return "?";
}

std::optional<ProblemKind> kind_from_string(std::string_view name) {
    if (name == "COV" || name == "cov") return ProblemKind::cov;
    if (name == "INF" || name == "inf") return ProblemKind::inf;
    if (name == "LOC" || name == "loc") return ProblemKind::loc;
    if (name == "DOM" || name == "dom") return ProblemKind::dom;
    return std::nullopt;
}

std::optional<WeightScheme> scheme_from_string(std::string_view name) {
    if (name == "normal") return WeightScheme::normal;
    if (name == "uniform") return WeightScheme::uniform;
    if (name == "unit") return WeightScheme::unit;
    if (name == "explicit") return WeightScheme::explicit_weights;
    return std::nullopt;
}

std::vector<double> generate_weights(std::size_t n, WeightScheme scheme,
                                     std::uint64_t seed) {
    std::vector<double> weights(n, 1.0);
    switch (scheme) {
        case WeightScheme::unit:
            break;
        case WeightScheme::uniform: {
            SplitMix64 rng(seed);
            for (double& w : weights) w = rng.next_range(0.4, 1.6);
            break;
        }
        case WeightScheme::normal: {
            SplitMix64 rng(seed);
            NormalSampler normal(rng);
            for (double& w : weights) {
                w = std::clamp(1.0 + 0.2 * normal.next(), 0.1, 1.9);
            }
            break;
        }
        case WeightScheme::explicit_weights:
            throw std::invalid_argument("explicit weights cannot be generated");
    }
    return weights;
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::unique_ptr<SubmodularOracle> build_oracle(ProblemKind kind, std::size_t n,
                                               const ProblemData& data) {
    switch (kind) {
        case ProblemKind::cov: {
            const auto& cov = std::get<CovData>(data);
            if (cov.sets.size() != n) {
                throw std::invalid_argument("COV needs one item set per element");
            }
            return make_cov(cov.item_count, cov.values, cov.sets);
        }
        case ProblemKind::inf: {
            const auto& inf = std::get<InfData>(data);
            return make_inf(n, inf.target_count, inf.edges);
        }
        case ProblemKind::loc: {
            const auto& loc = std::get<LocData>(data);
            return make_loc(n, loc.customer_count, loc.profits);
        }
        case ProblemKind::dom: {
            const auto& dom = std::get<DomData>(data);
            return make_dom(n, dom.edges);
        }
    }
    throw std::logic_error("unknown problem kind");
}

void normalize_data(ProblemKind kind, ProblemData& data) {
    if (kind == ProblemKind::cov) {
        for (auto& set : std::get<CovData>(data).sets) {
            std::sort(set.begin(), set.end());
            set.erase(std::unique(set.begin(), set.end()), set.end());
        }
    } else if (kind == ProblemKind::inf) {
        auto& edges = std::get<InfData>(data).edges;
        std::sort(edges.begin(), edges.end(), [](const InfEdge& a, const InfEdge& b) {
            return a.source != b.source ? a.source < b.source : a.target < b.target;
        });
    } else if (kind == ProblemKind::dom) {
        auto& edges = std::get<DomData>(data).edges;
        for (auto& [u, v] : edges) {
            if (u > v) std::swap(u, v);
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        std::erase_if(edges, [](const auto& e) { return e.first == e.second; });
    }
}

}  // namespace

Instance build_instance(ProblemKind kind, std::size_t n, ProblemData data,
                        WeightScheme scheme, std::uint64_t weight_seed,
                        std::vector<double> explicit_weights, double budget) {
    Instance instance;
    instance.kind = kind;
    instance.n = n;
    normalize_data(kind, data);
    instance.data = std::move(data);
    instance.weight_scheme = scheme;
    instance.weight_seed = scheme == WeightScheme::explicit_weights ? 0 : weight_seed;
    instance.weights = scheme == WeightScheme::explicit_weights
                           ? std::move(explicit_weights)
                           : generate_weights(n, scheme, weight_seed);
    instance.budget = budget;

    if (instance.weights.size() != n) {
        throw std::invalid_argument("expected " + std::to_string(n) + " weights, got " +
                                    std::to_string(instance.weights.size()));
    }
    for (double w : instance.weights) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument("element weights must be positive finite");
        }
    }
    if (!(budget > 0.0) || !std::isfinite(budget)) {
        throw std::invalid_argument("budget must be positive finite");
    }
    instance.oracle = build_oracle(kind, n, instance.data);
    return instance;
}

// ---------------------------------------------------------------------------
// Text format.

namespace {

class LineCursor {
public:
    explicit LineCursor(std::string_view text) {
        std::size_t start = 0;
        while (start <= text.size()) {
            const std::size_t end = text.find('\n', start);
            const std::string_view line =
                text.substr(start, end == std::string_view::npos ? text.size() - start
                                                                 : end - start);
            lines_.push_back(line);
            if (end == std::string_view::npos) break;
            start = end + 1;
        }
    }

    // Next non-blank line, or nullopt at end of input.
    std::optional<std::string_view> next() {
        while (pos_ < lines_.size()) {
            const std::string_view line = lines_[pos_++];
            if (line.find_first_not_of(" \t\r") != std::string_view::npos) return line;
        }
        return std::nullopt;
    }

    // Re-deliver the line most recently returned by next().
    void unget() {
        if (pos_ > 0) --pos_;
    }

    std::size_t line_number() const { return pos_; }  // 1-based, last consumed

private:
    std::vector<std::string_view> lines_;
    std::size_t pos_ = 0;
};

[[noreturn]] void fail(std::size_t line, const std::string& message) {
    throw ParseError("line " + std::to_string(line) + ": " + message);
}

std::vector<std::string> tokens_of(std::string_view line) {
    std::istringstream in{std::string(line)};
    std::vector<std::string> tokens;
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

double parse_double(const std::string& tok, std::size_t line) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) fail(line, "expected a number, got '" + tok + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& tok, std::size_t line) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
    if (end != tok.c_str() + tok.size() || tok.empty() || tok[0] == '-') {
        fail(line, "expected a nonnegative integer, got '" + tok + "'");
    }
    return v;
}

// 1-based index from the file into [0, bound).
std::uint32_t parse_index(const std::string& tok, std::uint64_t bound,
                          const char* what, std::size_t line) {
    const std::uint64_t v = parse_u64(tok, line);
    if (v < 1 || v > bound) {
        fail(line, std::string(what) + " " + tok + " out of range [1, " +
                       std::to_string(bound) + "]");
    }
    return static_cast<std::uint32_t>(v - 1);
}

std::string_view require_line(LineCursor& cursor, const char* what) {
    const auto line = cursor.next();
    if (!line) fail(cursor.line_number(), std::string("unexpected end of input, expected ") + what);
    return *line;
}

}  // namespace

Instance parse_instance(std::string_view text) {
    LineCursor cursor(text);

    const auto header = tokens_of(require_line(cursor, "header"));
    const std::size_t header_line = cursor.line_number();
    if (header.size() != 4 || header[0] != "SKP") {
        fail(header_line, "expected header 'SKP <KIND> <n> <aux>'");
    }
    const auto kind = kind_from_string(header[1]);
    if (!kind) fail(header_line, "unknown problem kind '" + header[1] + "'");
    const std::size_t n = parse_u64(header[2], header_line);
    const std::size_t aux = parse_u64(header[3], header_line);

    ProblemData data;
    switch (*kind) {
        case ProblemKind::cov: {
            CovData cov;
            cov.item_count = aux;
            if (aux > 0) {
                const auto toks = tokens_of(require_line(cursor, "item values"));
                const std::size_t line = cursor.line_number();
                if (toks.size() != aux) {
                    fail(line, "expected " + std::to_string(aux) + " item values, got " +
                                   std::to_string(toks.size()));
                }
                for (const auto& t : toks) {
                    const double v = parse_double(t, line);
                    if (!(v >= 0.0)) fail(line, "item value " + t + " must be nonnegative");
                    cov.values.push_back(v);
                }
            }
            for (std::size_t j = 0; j < n; ++j) {
                const auto toks = tokens_of(require_line(cursor, "an item set"));
                const std::size_t line = cursor.line_number();
                if (toks.empty()) fail(line, "expected '<k> <items...>'");
                const std::size_t k = parse_u64(toks[0], line);
                if (toks.size() != k + 1) {
                    fail(line, "set declares " + toks[0] + " items but lists " +
                                   std::to_string(toks.size() - 1));
                }
                std::vector<std::uint32_t> set;
                for (std::size_t t = 1; t < toks.size(); ++t) {
                    set.push_back(parse_index(toks[t], aux, "item id", line));
                }
                cov.sets.push_back(std::move(set));
            }
            data = std::move(cov);
            break;
        }
        case ProblemKind::inf: {
            InfData inf;
            inf.target_count = aux;
            // Edge lines run until the WEIGHTS section.
            for (;;) {
                const auto line = cursor.next();
                if (!line) fail(cursor.line_number(), "unexpected end of input in INF body");
                const auto toks = tokens_of(*line);
                if (!toks.empty() && toks[0] == "WEIGHTS") {
                    cursor.unget();
                    break;
                }
                const std::size_t lno = cursor.line_number();
                if (toks.size() != 3) fail(lno, "expected '<source> <target> <p>'");
                InfEdge edge;
                edge.source = parse_index(toks[0], n, "source id", lno);
                edge.target = parse_index(toks[1], aux, "target id", lno);
                edge.probability = parse_double(toks[2], lno);
                if (!(edge.probability >= 0.0 && edge.probability <= 1.0)) {
                    fail(lno, "probability " + toks[2] + " on edge (" + toks[0] + ", " +
                                  toks[1] + ") outside [0, 1]");
                }
                inf.edges.push_back(edge);
            }
            data = std::move(inf);
            break;
        }
        case ProblemKind::loc: {
            LocData loc;
            loc.customer_count = aux;
            if (n > 0) {
                loc.profits.reserve(aux * n);
                for (std::size_t i = 0; i < aux; ++i) {
                    const auto toks = tokens_of(require_line(cursor, "a profit row"));
                    const std::size_t line = cursor.line_number();
                    if (toks.size() != n) {
                        fail(line, "expected " + std::to_string(n) + " profits, got " +
                                       std::to_string(toks.size()));
                    }
                    for (const auto& t : toks) {
                        const double v = parse_double(t, line);
                        if (!(v >= 0.0)) fail(line, "profit " + t + " must be nonnegative");
                        loc.profits.push_back(v);
                    }
                }
            }
            data = std::move(loc);
            break;
        }
        case ProblemKind::dom: {
            DomData dom;
            for (std::size_t e = 0; e < aux; ++e) {
                const auto toks = tokens_of(require_line(cursor, "an edge"));
                const std::size_t line = cursor.line_number();
                if (toks.size() != 2) fail(line, "expected '<u> <v>'");
                dom.edges.emplace_back(parse_index(toks[0], n, "vertex id", line),
                                       parse_index(toks[1], n, "vertex id", line));
            }
            data = std::move(dom);
            break;
        }
    }

    // WEIGHTS section.
    const auto wtoks = tokens_of(require_line(cursor, "WEIGHTS"));
    const std::size_t wline = cursor.line_number();
    if (wtoks.empty() || wtoks[0] != "WEIGHTS" || wtoks.size() < 2) {
        fail(wline, "expected 'WEIGHTS EXPLICIT ...' or 'WEIGHTS SCHEME ...'");
    }
    WeightScheme scheme = WeightScheme::explicit_weights;
    std::uint64_t weight_seed = 0;
    std::vector<double> explicit_weights;
    if (wtoks[1] == "EXPLICIT") {
        if (wtoks.size() != n + 2) {
            fail(wline, "expected " + std::to_string(n) + " weights, got " +
                            std::to_string(wtoks.size() - 2));
        }
        for (std::size_t i = 2; i < wtoks.size(); ++i) {
            const double w = parse_double(wtoks[i], wline);
            if (!(w > 0.0)) fail(wline, "weight " + wtoks[i] + " must be positive");
            explicit_weights.push_back(w);
        }
    } else if (wtoks[1] == "SCHEME") {
        if (wtoks.size() != 4) fail(wline, "expected 'WEIGHTS SCHEME <name> <seed>'");
        const auto parsed = scheme_from_string(wtoks[2]);
        if (!parsed || *parsed == WeightScheme::explicit_weights) {
            fail(wline, "unknown weight scheme '" + wtoks[2] + "'");
        }
        scheme = *parsed;
        weight_seed = parse_u64(wtoks[3], wline);
    } else {
        fail(wline, "expected EXPLICIT or SCHEME, got '" + wtoks[1] + "'");
    }

    const auto btoks = tokens_of(require_line(cursor, "BUDGET"));
    const std::size_t bline = cursor.line_number();
    if (btoks.size() != 2 || btoks[0] != "BUDGET") fail(bline, "expected 'BUDGET <W>'");
    const double budget = parse_double(btoks[1], bline);
    if (!(budget > 0.0)) fail(bline, "budget " + btoks[1] + " must be positive");

    if (const auto extra = cursor.next()) {
        fail(cursor.line_number(), "unexpected trailing content");
    }

    try {
        return build_instance(*kind, n, std::move(data), scheme, weight_seed,
                              std::move(explicit_weights), budget);
    } catch (const std::exception& e) {
        throw ParseError(e.what());
    }
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_instance(buffer.str());
}

std::string serialize_instance(const Instance& instance,
                               std::optional<double> budget_override) {
    std::ostringstream out;
    std::size_t aux = 0;
    if (instance.kind == ProblemKind::cov) {
        aux = std::get<CovData>(instance.data).item_count;
    } else if (instance.kind == ProblemKind::inf) {
        aux = std::get<InfData>(instance.data).target_count;
    } else if (instance.kind == ProblemKind::loc) {
        aux = std::get<LocData>(instance.data).customer_count;
    } else {
        aux = std::get<DomData>(instance.data).edges.size();
    }
    out << "SKP " << to_string(instance.kind) << ' ' << instance.n << ' ' << aux << '\n';

    switch (instance.kind) {
        case ProblemKind::cov: {
            const auto& cov = std::get<CovData>(instance.data);
            if (cov.item_count > 0) {
                for (std::size_t i = 0; i < cov.values.size(); ++i) {
                    out << (i ? " " : "") << fmt_double(cov.values[i]);
                }
                out << '\n';
            }
            for (const auto& set : cov.sets) {
                out << set.size();
                for (std::uint32_t i : set) out << ' ' << i + 1;
                out << '\n';
            }
            break;
        }
        case ProblemKind::inf: {
            for (const InfEdge& e : std::get<InfData>(instance.data).edges) {
                out << e.source + 1 << ' ' << e.target + 1 << ' '
                    << fmt_double(e.probability) << '\n';
            }
            break;
        }
        case ProblemKind::loc: {
            const auto& loc = std::get<LocData>(instance.data);
            if (instance.n > 0) {
                for (std::size_t i = 0; i < loc.customer_count; ++i) {
                    for (std::size_t j = 0; j < instance.n; ++j) {
                        out << (j ? " " : "")
                            << fmt_double(loc.profits[i * instance.n + j]);
                    }
                    out << '\n';
                }
            }
            break;
        }
        case ProblemKind::dom: {
            for (const auto& [u, v] : std::get<DomData>(instance.data).edges) {
                out << u + 1 << ' ' << v + 1 << '\n';
            }
            break;
        }
    }

    if (instance.weight_scheme == WeightScheme::explicit_weights) {
        out << "WEIGHTS EXPLICIT";
        for (double w : instance.weights) out << ' ' << fmt_double(w);
        out << '\n';
    } else {
        out << "WEIGHTS SCHEME " << to_string(instance.weight_scheme) << ' '
            << instance.weight_seed << '\n';
    }
    out << "BUDGET " << fmt_double(budget_override.value_or(instance.budget)) << '\n';
    return std::move(out).str();
}

std::uint64_t instance_fingerprint(const Instance& instance,
                                   std::optional<double> budget_override) {
    const std::string text = serialize_instance(instance, budget_override);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

Instance generate_random_instance(ProblemKind kind, const GenerateParams& params,
                                  std::uint64_t seed) {
    SplitMix64 rng(seed);
    const std::size_t n = params.n;
    ProblemData data;
    switch (kind) {
        case ProblemKind::cov: {
            CovData cov;
            cov.item_count = params.m;
            cov.values.resize(params.m);
            for (double& v : cov.values) {
                v = static_cast<double>(rng.next_below(10) + 1);  // integral, 1..10
            }
            cov.sets.resize(n);
            for (auto& set : cov.sets) {
                for (std::size_t i = 0; i < params.m; ++i) {
                    if (rng.next_unit() < params.density) {
                        set.push_back(static_cast<std::uint32_t>(i));
                    }
                }
            }
            data = std::move(cov);
            break;
        }
        case ProblemKind::inf: {
            InfData inf;
            inf.target_count = params.m;
            for (std::size_t j = 0; j < n; ++j) {
                for (std::size_t i = 0; i < params.m; ++i) {
                    if (rng.next_unit() < params.density) {
                        inf.edges.push_back({static_cast<std::uint32_t>(j),
                                             static_cast<std::uint32_t>(i),
                                             rng.next_unit()});
                    }
                }
            }
            data = std::move(inf);
            break;
        }
        case ProblemKind::loc: {
            LocData loc;
            loc.customer_count = params.m;
            loc.profits.resize(params.m * n);
            for (double& v : loc.profits) {
                // density controls how many facility-customer pairs pay at all
                v = rng.next_unit() < params.density
                        ? static_cast<double>(rng.next_below(9) + 1)
                        : 0.0;
            }
            data = std::move(loc);
            break;
        }
        case ProblemKind::dom: {
            DomData dom;
            for (std::size_t u = 0; u < n; ++u) {
                for (std::size_t v = u + 1; v < n; ++v) {
                    if (rng.next_unit() < params.density) {
                        dom.edges.emplace_back(static_cast<std::uint32_t>(u),
                                               static_cast<std::uint32_t>(v));
                    }
                }
            }
            data = std::move(dom);
            break;
        }
    }
    return build_instance(kind, n, std::move(data), params.scheme, params.weight_seed,
                          {}, params.budget);
}

}  // namespace skp
