#ifndef QS3_POLY_HPP
#define QS3_POLY_HPP

#include "qs3/rational.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qs3 {

// Atoms of the scalar field: a coordinate symbol z, sin(z) or cos(z) of it.
// Atom ids interleave the three kinds so all atoms of one coordinate stay
// adjacent in the fixed total order.
enum class AtomKind : std::uint32_t { Var = 0, Sin = 1, Cos = 2 };

using Atom = std::uint32_t;

inline Atom make_atom(std::uint32_t coord, AtomKind kind) {
    return coord * 3 + static_cast<std::uint32_t>(kind);
}
inline std::uint32_t atom_coord(Atom a) { return a / 3; }
inline AtomKind atom_kind(Atom a) { return static_cast<AtomKind>(a % 3); }

// Sparse monomial: (atom, exponent) pairs sorted by atom id, exponents > 0.
using Monomial = std::vector<std::pair<Atom, std::uint32_t>>;

// Graded lexicographic order (total degree first, then lex with lower atom
// ids more significant). Compatible with monomial multiplication, which the
// exact-division and pseudo-remainder routines rely on.
struct DegLexLess {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

Monomial mono_mul(const Monomial& a, const Monomial& b);
// Returns true and the quotient when b divides a.
bool mono_div(const Monomial& a, const Monomial& b, Monomial& out);
std::uint32_t mono_degree_of(const Monomial& m, Atom a);
std::uint32_t mono_total_degree(const Monomial& m);

// Polynomial over the rationals in the atoms above, kept in canonical form:
// no zero coefficients and every Sin atom has exponent <= 1 (the rewrite
// sin^2 -> 1 - cos^2 is applied to fixpoint by all constructors/operations).
class Poly {
 public:
    using Map = std::map<Monomial, Rational, DegLexLess>;

    Poly() = default;
    static Poly constant(const Rational& r);
    static Poly atom(Atom a);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    // Constant term; only meaningful together with is_constant().
    Rational constant_value() const;

    const Map& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);

    bool operator==(const Poly& o) const { return terms_ == o.terms_; }

    Poly scaled(const Rational& r) const;

    // Partial derivative with respect to the coordinate of index `coord`
    // (d sin = cos, d cos = -sin).
    Poly derivative(std::uint32_t coord) const;

    // Substitutes numeric coordinate values; `point[coord]` is the value of
    // that coordinate symbol.
    double eval(const std::vector<double>& point) const;

    // Leading monomial/coefficient under the fixed order. Polynomial must be
    // nonzero.
    const Monomial& leading_monomial() const;
    const Rational& leading_coefficient() const;

    // Largest atom id appearing anywhere, or false when constant.
    bool max_atom(Atom& out) const;

    std::uint32_t degree_in(Atom a) const;

    // Positive rational c such that (1/c)*this has coprime integer
    // coefficients. Zero polynomial yields 1.
    Rational content() const;

    // All atoms that occur, ascending.
    std::vector<Atom> atoms() const;

    std::string to_string(const std::vector<std::string>& coord_names) const;

 private:
    explicit Poly(Map m) : terms_(std::move(m)) {}
    friend Poly poly_gcd(const Poly&, const Poly&);
    friend Poly poly_div_exact(const Poly&, const Poly&);
    void add_term(const Monomial& m, const Rational& c);
    void reduce_trig();

    Map terms_;
};

// gcd(a, b), primitive with positive leading coefficient; gcd(0,0) = 0.
Poly poly_gcd(const Poly& a, const Poly& b);

// Quotient of an exact division; the caller guarantees divisibility.
Poly poly_div_exact(const Poly& a, const Poly& b);

}  // namespace qs3

#endif
