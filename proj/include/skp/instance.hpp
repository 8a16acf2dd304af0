#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "skp/oracle.hpp"

namespace skp {

enum class ProblemKind { cov, inf, loc, dom };
enum class WeightScheme { normal, uniform, unit, explicit_weights };

const char* to_string(ProblemKind kind);
const char* to_string(WeightScheme scheme);
std::optional<ProblemKind> kind_from_string(std::string_view name);
std::optional<WeightScheme> scheme_from_string(std::string_view name);

// Raw problem payloads, kept alongside the oracle so instances can be
// serialized back out. All indices are 0-based in memory; the text format is
// 1-based.
struct CovData {
    std::size_t item_count = 0;
    std::vector<double> values;                       // per item
    std::vector<std::vector<std::uint32_t>> sets;     // per element, sorted
};
struct InfData {
    std::size_t target_count = 0;
    std::vector<InfEdge> edges;  // sorted by (source, target)
};
struct LocData {
    std::size_t customer_count = 0;
    std::vector<double> profits;  // customer-major, m x n
};
struct DomData {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // u < v, sorted
};

using ProblemData = std::variant<CovData, InfData, LocData, DomData>;

struct Instance {
    ProblemKind kind = ProblemKind::cov;
    std::size_t n = 0;
    ProblemData data;
    WeightScheme weight_scheme = WeightScheme::explicit_weights;
    std::uint64_t weight_seed = 0;
    std::vector<double> weights;
    double budget = 0.0;
    std::unique_ptr<SubmodularOracle> oracle;
};

// Normalizes the payload (sorting, deduplication), expands scheme-directed
// weights, validates everything and constructs the oracle. explicit_weights
// is consumed only when scheme == explicit_weights.
Instance build_instance(ProblemKind kind, std::size_t n, ProblemData data,
                        WeightScheme scheme, std::uint64_t weight_seed,
                        std::vector<double> explicit_weights, double budget);

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Instance parse_instance(std::string_view text);
Instance load_instance(const std::string& path);

// Canonical text form; parse(serialize(x)) == x for instances built through
// build_instance. budget_override substitutes the budget line, which is how
// sweeps fingerprint the effective problem.
std::string serialize_instance(const Instance& instance,
                               std::optional<double> budget_override = {});

// FNV-1a over the canonical text.
std::uint64_t instance_fingerprint(const Instance& instance,
                                   std::optional<double> budget_override = {});

// Deterministic for (n, scheme, seed):
//   normal   N(1, 0.2) clamped to [0.1, 1.9] (inclusive)
//   uniform  U(0.4, 1.6)
//   unit     all ones (seed ignored)
// Draws come from SplitMix64(seed); the normal scheme consumes Box-Muller
// pairs in order.
std::vector<double> generate_weights(std::size_t n, WeightScheme scheme,
                                     std::uint64_t seed);

struct GenerateParams {
    std::size_t n = 10;
    std::size_t m = 15;      // items / targets / customers; ignored for DOM
    double density = 0.3;    // membership or edge probability
    WeightScheme scheme = WeightScheme::unit;
    std::uint64_t weight_seed = 0;
    double budget = 2.0;
};

// Pure function of (kind, params, seed); all four families.
Instance generate_random_instance(ProblemKind kind, const GenerateParams& params,
                                  std::uint64_t seed);

}  // namespace skp
