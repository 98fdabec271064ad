#include "qs3/scalar.hpp"

#include "qs3/errors.hpp"

namespace qs3 {

void ScalarExpr::canonicalize(Poly& num, Poly& den) {
    if (den.is_zero()) throw Error(ErrorCode::DivisionByZeroExpr, "denominator is identically zero");
    if (num.is_zero()) {
        den = Poly::constant(1);
        return;
    }
    if (den.is_constant()) {
        num = num.scaled(Rational(1) / den.constant_value());
        den = Poly::constant(1);
        return;
    }
    Poly g = poly_gcd(num, den);
    if (!(g.is_constant())) {
        num = poly_div_exact(num, g);
        den = poly_div_exact(den, g);
    }
    if (den.is_constant()) {
        num = num.scaled(Rational(1) / den.constant_value());
        den = Poly::constant(1);
        return;
    }
    // Scale so the denominator has coprime integer coefficients and a
    // positive leading coefficient; the numerator absorbs the factor.
    Rational q = den.content();
    if (den.leading_coefficient() < 0) q = -q;
    den = den.scaled(Rational(1) / q);
    num = num.scaled(Rational(1) / q);
}

ScalarExpr ScalarExpr::from_rational(const Rational& r) {
    return ScalarExpr(Poly::constant(r), Poly::constant(1));
}

ScalarExpr ScalarExpr::coord(std::uint32_t index) {
    return ScalarExpr(Poly::atom(make_atom(index, AtomKind::Var)), Poly::constant(1));
}

ScalarExpr ScalarExpr::sin_of(std::uint32_t index) {
    return ScalarExpr(Poly::atom(make_atom(index, AtomKind::Sin)), Poly::constant(1));
}

ScalarExpr ScalarExpr::cos_of(std::uint32_t index) {
    return ScalarExpr(Poly::atom(make_atom(index, AtomKind::Cos)), Poly::constant(1));
}

ScalarExpr ScalarExpr::fraction(Poly num, Poly den) {
    canonicalize(num, den);
    return ScalarExpr(std::move(num), std::move(den));
}

bool ScalarExpr::is_rational() const { return num_.is_constant() && den_.is_constant(); }

Rational ScalarExpr::rational_value() const {
    if (!is_rational()) throw Error(ErrorCode::NonConstantAbstractCoefficient, "value is not constant");
    return num_.constant_value() / den_.constant_value();
}

ScalarExpr ScalarExpr::operator-() const { return ScalarExpr(-num_, den_); }

ScalarExpr ScalarExpr::operator+(const ScalarExpr& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    Poly num, den;
    if (den_ == o.den_) {
        num = num_ + o.num_;
        den = den_;
    } else {
        num = num_ * o.den_ + o.num_ * den_;
        den = den_ * o.den_;
    }
    canonicalize(num, den);
    return ScalarExpr(std::move(num), std::move(den));
}

ScalarExpr ScalarExpr::operator-(const ScalarExpr& o) const { return *this + (-o); }

ScalarExpr ScalarExpr::operator*(const ScalarExpr& o) const {
    if (is_zero() || o.is_zero()) return ScalarExpr();
    Poly num = num_ * o.num_;
    Poly den = den_ * o.den_;
    canonicalize(num, den);
    return ScalarExpr(std::move(num), std::move(den));
}

ScalarExpr ScalarExpr::operator/(const ScalarExpr& o) const {
    if (o.is_zero()) throw Error(ErrorCode::DivisionByZeroExpr, "division by zero expression");
    Poly num = num_ * o.den_;
    Poly den = den_ * o.num_;
    canonicalize(num, den);
    return ScalarExpr(std::move(num), std::move(den));
}

ScalarExpr ScalarExpr::diff(std::uint32_t coord) const {
    Poly num = num_.derivative(coord) * den_ - num_ * den_.derivative(coord);
    Poly den = den_ * den_;
    canonicalize(num, den);
    return ScalarExpr(std::move(num), std::move(den));
}

double ScalarExpr::eval(const std::vector<double>& point) const {
    return num_.eval(point) / den_.eval(point);
}

std::string ScalarExpr::to_string(const std::vector<std::string>& coord_names) const {
    std::string n = num_.to_string(coord_names);
    if (den_.is_constant()) return n;
    std::string d = den_.to_string(coord_names);
    bool n_simple = num_.term_count() <= 1 && num_.leading_coefficient() > 0;
    std::string out = n_simple ? n : "(" + n + ")";
    out += "/(" + d + ")";
    return out;
}

std::vector<Atom> ScalarExpr::atoms() const {
    std::vector<Atom> a = num_.atoms(), b = den_.atoms();
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

}  // namespace qs3
