#ifndef QS3_NUMERIC_HPP
#define QS3_NUMERIC_HPP

#include "qs3/dsl.hpp"
#include "qs3/report.hpp"

#include <cstdint>
#include <optional>

namespace qs3 {

struct OracleOptions {
    int points = 5;
    std::uint64_t seed = 1;
    double tolerance = 1e-8;
    // When set, evaluation happens at exactly this chart point.
    std::optional<std::vector<double>> fixed_point;
};

// Floating-point cross-check of every passed entry: zero residuals must
// evaluate below tolerance at random chart points (avoiding excluded loci
// and denominator zeros), nonzero claims must exceed it somewhere. Appends
// one concordance entry; returns false when exact and numeric verdicts
// disagree.
bool numeric_crosscheck(CheckReport& report, const ManifoldSpec& spec, const OracleOptions& opt);

// Chart points used by the oracle (exposed for tests).
std::vector<std::vector<double>> oracle_points(const ManifoldSpec& spec, const OracleOptions& opt,
                                               const CheckReport& report);

}  // namespace qs3

#endif
