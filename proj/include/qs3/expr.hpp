#ifndef QS3_EXPR_HPP
#define QS3_EXPR_HPP

#include "qs3/rational.hpp"
#include "qs3/scalar.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace qs3 {

// Raw expression tree as written in the source grammar, kept around so that
// numeric cross-checks can evaluate the original tree independently of the
// canonical form produced by normalize().
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Rat, Coord, Sin, Cos, Tan, Cot, Add, Sub, Mul, Div, Neg };

    Kind kind;
    Rational value;       // Rat
    std::uint32_t coord;  // Coord / trig kinds
    ExprPtr a, b;

    static ExprPtr rat(const Rational& r);
    static ExprPtr coord_ref(std::uint32_t index);
    static ExprPtr trig(Kind k, std::uint32_t index);
    static ExprPtr binary(Kind k, ExprPtr lhs, ExprPtr rhs);
    static ExprPtr negate(ExprPtr inner);
};

// Canonicalizes the tree into the scalar field, eliminating tan and cot as
// sin/cos quotients. Throws DivisionByZeroExpr when a denominator vanishes
// identically.
ScalarExpr normalize(const ExprPtr& e);

// Plain floating-point evaluation of the tree at a chart point.
double eval_tree(const ExprPtr& e, const std::vector<double>& point);

struct ExprSymbols {
    const std::vector<std::string>* coords = nullptr;          // coordinate names
    const std::map<std::string, Rational>* params = nullptr;   // optional named constants
};

// Parses a complete scalar expression. Errors carry 1-based column info.
ExprPtr parse_scalar_source(const std::string& src, const ExprSymbols& syms);

// Parses a linear combination of named basis fields with scalar-expression
// coefficients, e.g. "cos(z1)*cot(z2)*E1 - 2*E3". Each additive term must
// contain exactly one basis name, never behind a division; the literal "0"
// denotes the zero combination. Returns one coefficient tree per basis entry
// (null for absent ones).
std::vector<ExprPtr> parse_vector_source(const std::string& src, const ExprSymbols& syms,
                                         const std::vector<std::string>& basis);

}  // namespace qs3

#endif
