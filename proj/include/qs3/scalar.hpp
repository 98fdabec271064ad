#ifndef QS3_SCALAR_HPP
#define QS3_SCALAR_HPP

#include "qs3/poly.hpp"

#include <string>
#include <vector>

namespace qs3 {

// Element of the scalar field: a fraction of trig-rational polynomials kept
// in canonical form. Canonical means: numerator and denominator are
// gcd-reduced, every sin atom appears with degree <= 1, the denominator has
// coprime integer coefficients and positive leading coefficient. The zero
// function is exactly the zero numerator, which makes is_zero() the equality
// oracle for every identity check in the project.
class ScalarExpr {
 public:
    ScalarExpr() : num_(), den_(Poly::constant(1)) {}

    static ScalarExpr from_rational(const Rational& r);
    static ScalarExpr from_int(long long v) { return from_rational(Rational(v)); }
    static ScalarExpr coord(std::uint32_t index);
    static ScalarExpr sin_of(std::uint32_t index);
    static ScalarExpr cos_of(std::uint32_t index);
    // Throws DivisionByZeroExpr when den is the zero polynomial.
    static ScalarExpr fraction(Poly num, Poly den);

    bool is_zero() const { return num_.is_zero(); }
    bool is_rational() const;
    // Value when is_rational(); throws otherwise.
    Rational rational_value() const;

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }

    ScalarExpr operator-() const;
    ScalarExpr operator+(const ScalarExpr& o) const;
    ScalarExpr operator-(const ScalarExpr& o) const;
    ScalarExpr operator*(const ScalarExpr& o) const;
    // Throws DivisionByZeroExpr when o is zero.
    ScalarExpr operator/(const ScalarExpr& o) const;
    ScalarExpr& operator+=(const ScalarExpr& o) { return *this = *this + o; }
    ScalarExpr& operator-=(const ScalarExpr& o) { return *this = *this - o; }

    // Structural equality of canonical forms. Identity checks should use
    // (a - b).is_zero() instead, which also sees through the trig relation.
    bool operator==(const ScalarExpr& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const ScalarExpr& o) const { return !(*this == o); }

    bool same_function(const ScalarExpr& o) const { return (*this - o).is_zero(); }

    ScalarExpr diff(std::uint32_t coord) const;

    double eval(const std::vector<double>& point) const;
    double eval_den(const std::vector<double>& point) const { return den_.eval(point); }

    // Rendering in the expression grammar; reparses to the same value.
    std::string to_string(const std::vector<std::string>& coord_names) const;

    std::vector<Atom> atoms() const;

 private:
    ScalarExpr(Poly n, Poly d) : num_(std::move(n)), den_(std::move(d)) {}
    static void canonicalize(Poly& num, Poly& den);

    Poly num_;
    Poly den_;
};

inline ScalarExpr operator*(const Rational& r, const ScalarExpr& e) {
    return ScalarExpr::from_rational(r) * e;
}

}  // namespace qs3

#endif
