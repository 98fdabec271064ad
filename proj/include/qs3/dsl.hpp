#ifndef QS3_DSL_HPP
#define QS3_DSL_HPP

#include "qs3/contact.hpp"
#include "qs3/triple.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qs3 {

// Parsed manifold description. One structure (plain almost contact) or three
// (almost 3-contact); dimension must be odd, respectively 3 mod 4.
//
// Source format, one self-describing line each:
//   manifold NAME
//   params k=v ...
//   coords z1 z2 ...                          (present -> coordinate mode)
//   frame NAME = expr*d_z1 + ...              (coordinate mode)
//   frame NAME                                (abstract mode)
//   bracket [A,B] = expr*C + ... | 0          (abstract mode)
//   domain exclude expr                       (removed vanishing locus)
//   metric orthonormal | metric g(A,B) = expr
//   structure K xi = vexpr
//   structure K eta(NAME) = expr
//   structure K phi(NAME) = vexpr | 0
struct StructureSpec {
    std::vector<ScalarExpr> xi;               // frame components
    std::vector<ScalarExpr> eta;              // value on each frame field
    std::vector<std::vector<ScalarExpr>> phi; // column b: phi(E_b) frame components
};

struct ManifoldSpec {
    std::string name;
    std::map<std::string, Rational> params;
    std::vector<std::string> coords;
    std::vector<std::string> frame_names;
    bool abstract_mode = false;
    SMatrix frame;  // coordinate mode: frame[a][i]
    std::vector<std::vector<std::vector<ScalarExpr>>> brackets;  // abstract mode
    std::vector<ScalarExpr> domain_excluded;
    enum class MetricKind { None, Orthonormal, Explicit } metric_kind = MetricKind::None;
    SMatrix metric;  // explicit components
    std::vector<StructureSpec> structures;

    std::size_t dim() const { return frame_names.size(); }
};

// Parses DSL source; diagnostics carry 1-based line numbers.
ManifoldSpec parse_spec(const std::string& src);

// Canonical emission; emit-then-parse reproduces the spec exactly.
std::string emit_spec(const ManifoldSpec& spec);

// Instantiated geometry ready for the check suites.
struct Geometry {
    PatchPtr patch;
    std::optional<Metric> metric;
    std::vector<AlmostContactStructure> structures;
};
Geometry build_geometry(const ManifoldSpec& spec);

// Structural equality of two parsed specs (canonical component equality).
bool specs_equal(const ManifoldSpec& a, const ManifoldSpec& b);

}  // namespace qs3

#endif
