#ifndef QS3_SUITE_HPP
#define QS3_SUITE_HPP

#include "qs3/dsl.hpp"
#include "qs3/report.hpp"

#include <optional>

namespace qs3 {

enum class Suite {
    Axioms,
    Normality,
    QuasiSasakian,
    Classification,
    Foliation,
    Rank,
    Splitting,
    Energy,
    All,
};

std::optional<Suite> parse_suite(const std::string& name);
const char* suite_name(Suite s);

// Runs the selected checks in dependency order. Prerequisite stages are
// evaluated silently so a partial suite still skips correctly and carries a
// meaningful verdict. All failures surface as report entries, never as
// exceptions.
CheckReport run_suite(const ManifoldSpec& spec, Suite suite);

}  // namespace qs3

#endif
