#include "qs3/poly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qs3 {

namespace {

using Map = Poly::Map;

// ---- raw map arithmetic (free polynomial ring, no trig rewrite) ----------

void map_add_term(Map& m, const Monomial& mono, const Rational& c) {
    if (c == 0) return;
    auto it = m.find(mono);
    if (it == m.end()) {
        m.emplace(mono, c);
    } else {
        it->second += c;
        if (it->second == 0) m.erase(it);
    }
}

Map map_add(const Map& a, const Map& b) {
    Map r = a;
    for (const auto& [mono, c] : b) map_add_term(r, mono, c);
    return r;
}

Map map_neg(const Map& a) {
    Map r = a;
    for (auto& [mono, c] : r) c = -c;
    return r;
}

Map map_sub(const Map& a, const Map& b) {
    Map r = a;
    for (const auto& [mono, c] : b) map_add_term(r, mono, -c);
    return r;
}

Map map_mul(const Map& a, const Map& b) {
    Map r;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) map_add_term(r, mono_mul(ma, mb), ca * cb);
    return r;
}

Map map_scale(const Map& a, const Rational& c) {
    Map r;
    if (c == 0) return r;
    for (const auto& [mono, coeff] : a) r.emplace(mono, coeff * c);
    return r;
}

Map map_mul_mono(const Map& a, const Monomial& m) {
    Map r;
    for (const auto& [mono, c] : a) r.emplace(mono_mul(mono, m), c);
    return r;
}

std::uint32_t map_degree_in(const Map& a, Atom x) {
    std::uint32_t d = 0;
    for (const auto& [mono, c] : a) d = std::max(d, mono_degree_of(mono, x));
    return d;
}

// Coefficient of x^k, as a polynomial in the remaining atoms.
Map map_coeff_of(const Map& a, Atom x, std::uint32_t k) {
    Map r;
    for (const auto& [mono, c] : a) {
        if (mono_degree_of(mono, x) != k) continue;
        Monomial rest;
        for (const auto& p : mono)
            if (p.first != x) rest.push_back(p);
        r.emplace(rest, c);
    }
    return r;
}

bool map_is_constant(const Map& a) {
    return a.empty() || (a.size() == 1 && a.begin()->first.empty());
}

Rational map_content(const Map& a) {
    if (a.empty()) return Rational(1);
    BigInt num_gcd = 0, den_lcm = 1;
    for (const auto& [mono, c] : a) {
        num_gcd = boost::multiprecision::gcd(num_gcd, rat_num(c) < 0 ? BigInt(-rat_num(c)) : rat_num(c));
        den_lcm = boost::multiprecision::lcm(den_lcm, rat_den(c));
    }
    if (num_gcd == 0) num_gcd = 1;
    return Rational(num_gcd, den_lcm);
}

// Exact quotient a / b under the deglex order; throws if b does not divide a.
Map map_div_exact(const Map& a, const Map& b) {
    if (b.empty()) throw std::logic_error("poly exact division by zero");
    Map r = a, q;
    const Monomial& lmb = b.rbegin()->first;
    const Rational& lcb = b.rbegin()->second;
    while (!r.empty()) {
        const Monomial& lmr = r.rbegin()->first;
        Monomial t;
        if (!mono_div(lmr, lmb, t)) throw std::logic_error("poly division not exact");
        Rational tc = r.rbegin()->second / lcb;
        map_add_term(q, t, tc);
        Map tb = map_mul_mono(map_scale(b, tc), t);
        r = map_sub(r, tb);
    }
    return q;
}

// Divides out rational content and makes the leading coefficient positive.
Map map_primitive_positive(const Map& a) {
    if (a.empty()) return a;
    Rational c = map_content(a);
    if (a.rbegin()->second < 0) c = -c;
    Map r;
    for (const auto& [mono, coeff] : a) r.emplace(mono, coeff / c);
    return r;
}

Map map_gcd(const Map& a, const Map& b);

// gcd of the x-coefficients of a.
Map map_content_wrt(const Map& a, Atom x) {
    Map g;
    std::uint32_t d = map_degree_in(a, x);
    for (std::uint32_t k = 0; k <= d; ++k) {
        Map ck = map_coeff_of(a, x, k);
        if (ck.empty()) continue;
        g = map_gcd(g, ck);
        if (map_is_constant(g) && !g.empty()) break;
    }
    return g;
}

// Pseudo-remainder of a by b with respect to x (up to a constant factor,
// which the primitive PRS discards anyway).
Map map_pseudo_rem(Map a, const Map& b, Atom x) {
    std::uint32_t db = map_degree_in(b, x);
    Map lcb = map_coeff_of(b, x, db);
    while (!a.empty()) {
        std::uint32_t da = map_degree_in(a, x);
        if (da < db) break;
        Map lca = map_coeff_of(a, x, da);
        Monomial shift;
        if (da > db) shift.emplace_back(x, da - db);
        // a <- lcb*a - lca*x^(da-db)*b
        a = map_sub(map_mul(lcb, a), map_mul_mono(map_mul(lca, b), shift));
    }
    return a;
}

Atom map_max_atom(const Map& a) {
    Atom best = 0;
    bool found = false;
    for (const auto& [mono, c] : a)
        for (const auto& p : mono)
            if (!found || p.first > best) {
                best = p.first;
                found = true;
            }
    return best;
}

bool map_with_single_term(const Map& a) { return a.size() == 1; }

// gcd(monomial, b): the common monomial factor, content 1.
Map map_gcd_with_monomial(const Map& mono_poly, const Map& b) {
    Monomial m = mono_poly.begin()->first;
    for (const auto& [mb, c] : b) {
        Monomial next;
        std::size_t i = 0, j = 0;
        while (i < m.size() && j < mb.size()) {
            if (m[i].first == mb[j].first) {
                next.emplace_back(m[i].first, std::min(m[i].second, mb[j].second));
                ++i;
                ++j;
            } else if (m[i].first < mb[j].first) {
                ++i;
            } else {
                ++j;
            }
        }
        m = std::move(next);
        if (m.empty()) break;
    }
    Map r;
    r.emplace(m, Rational(1));
    return r;
}

Map map_gcd(const Map& a, const Map& b) {
    if (a.empty()) return map_primitive_positive(b);
    if (b.empty()) return map_primitive_positive(a);
    if (map_is_constant(a) || map_is_constant(b)) {
        Map one;
        one.emplace(Monomial{}, Rational(1));
        return one;
    }
    if (map_with_single_term(a)) return map_gcd_with_monomial(a, b);
    if (map_with_single_term(b)) return map_gcd_with_monomial(b, a);

    Atom x = std::max(map_max_atom(a), map_max_atom(b));
    Map cont_a = map_content_wrt(a, x);
    Map cont_b = map_content_wrt(b, x);
    Map pa = map_div_exact(a, cont_a);
    Map pb = map_div_exact(b, cont_b);
    Map c = map_gcd(cont_a, cont_b);
    if (map_degree_in(pa, x) < map_degree_in(pb, x)) std::swap(pa, pb);
    while (!pb.empty()) {
        Map r = map_pseudo_rem(pa, pb, x);
        pa = std::move(pb);
        if (r.empty()) {
            pb.clear();
        } else if (map_degree_in(r, x) == 0) {
            // Nontrivial constant (in x) remainder: gcd has no x part.
            Map one;
            one.emplace(Monomial{}, Rational(1));
            pa = one;
            pb.clear();
        } else {
            Map rc = map_content_wrt(r, x);
            pb = map_div_exact(r, rc);
        }
    }
    return map_primitive_positive(map_mul(c, map_primitive_positive(pa)));
}

}  // namespace

// ---- monomial utilities ---------------------------------------------------

bool DegLexLess::operator()(const Monomial& a, const Monomial& b) const {
    std::uint32_t da = mono_total_degree(a), db = mono_total_degree(b);
    if (da != db) return da < db;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first != b[j].first) {
            // The monomial holding the smaller atom has the higher power of
            // the most significant differing atom, so it is the larger one.
            return a[i].first > b[j].first;
        }
        if (a[i].second != b[j].second) return a[i].second < b[j].second;
        ++i;
        ++j;
    }
    return false;  // identical (equal degrees force simultaneous exhaustion)
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r;
    r.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first == b[j].first) {
            r.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i;
            ++j;
        } else if (a[i].first < b[j].first) {
            r.push_back(a[i++]);
        } else {
            r.push_back(b[j++]);
        }
    }
    for (; i < a.size(); ++i) r.push_back(a[i]);
    for (; j < b.size(); ++j) r.push_back(b[j]);
    return r;
}

bool mono_div(const Monomial& a, const Monomial& b, Monomial& out) {
    out.clear();
    std::size_t i = 0;
    for (const auto& [atom, exp] : b) {
        while (i < a.size() && a[i].first < atom) {
            out.push_back(a[i]);
            ++i;
        }
        if (i >= a.size() || a[i].first != atom || a[i].second < exp) return false;
        if (a[i].second > exp) out.emplace_back(atom, a[i].second - exp);
        ++i;
    }
    for (; i < a.size(); ++i) out.push_back(a[i]);
    return true;
}

std::uint32_t mono_degree_of(const Monomial& m, Atom a) {
    for (const auto& p : m)
        if (p.first == a) return p.second;
    return 0;
}

std::uint32_t mono_total_degree(const Monomial& m) {
    std::uint32_t d = 0;
    for (const auto& p : m) d += p.second;
    return d;
}

// ---- Poly ------------------------------------------------------------------

Poly Poly::constant(const Rational& r) {
    Poly p;
    if (r != 0) p.terms_.emplace(Monomial{}, r);
    return p;
}

Poly Poly::atom(Atom a) {
    Poly p;
    p.terms_.emplace(Monomial{{a, 1}}, Rational(1));
    return p;
}

bool Poly::is_constant() const { return map_is_constant(terms_); }

Rational Poly::constant_value() const {
    if (terms_.empty()) return Rational(0);
    return terms_.begin()->second;
}

void Poly::add_term(const Monomial& m, const Rational& c) { map_add_term(terms_, m, c); }

// Rewrites sin^k with k >= 2 into (1 - cos^2)^(k/2) * sin^(k mod 2) in every
// monomial. Canonical inputs to + and - cannot produce such powers, so only
// multiplication and differentiation call this.
void Poly::reduce_trig() {
    Map pending;
    for (auto it = terms_.begin(); it != terms_.end();) {
        bool needs = false;
        for (const auto& [atom, exp] : it->first)
            if (atom_kind(atom) == AtomKind::Sin && exp >= 2) {
                needs = true;
                break;
            }
        if (!needs) {
            ++it;
            continue;
        }
        Map expansion;
        expansion.emplace(Monomial{}, it->second);
        for (const auto& [atom, exp] : it->first) {
            if (atom_kind(atom) == AtomKind::Sin && exp >= 2) {
                std::uint32_t k = exp / 2, r = exp % 2;
                // (1 - cos^2)^k expanded binomially.
                Map part;
                Atom cos_atom = make_atom(atom_coord(atom), AtomKind::Cos);
                Rational binom(1);
                for (std::uint32_t j = 0; j <= k; ++j) {
                    Monomial m;
                    if (j > 0) m.emplace_back(cos_atom, 2 * j);
                    if (r > 0) m = mono_mul(m, Monomial{{atom, r}});
                    Rational coeff = binom;
                    if (j % 2 == 1) coeff = -coeff;
                    map_add_term(part, m, coeff);
                    binom = binom * Rational(k - j) / Rational(j + 1);
                }
                expansion = map_mul(expansion, part);
            } else {
                expansion = map_mul_mono(expansion, Monomial{{atom, exp}});
            }
        }
        for (const auto& [m, c] : expansion) map_add_term(pending, m, c);
        it = terms_.erase(it);
    }
    for (const auto& [m, c] : pending) map_add_term(terms_, m, c);
}

Poly Poly::operator-() const {
    Poly r;
    r.terms_ = map_neg(terms_);
    return r;
}

Poly Poly::operator+(const Poly& o) const {
    Poly r;
    r.terms_ = map_add(terms_, o.terms_);
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    Poly r;
    r.terms_ = map_sub(terms_, o.terms_);
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    Poly r;
    r.terms_ = map_mul(terms_, o.terms_);
    r.reduce_trig();
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    terms_ = map_add(terms_, o.terms_);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    terms_ = map_sub(terms_, o.terms_);
    return *this;
}

Poly Poly::scaled(const Rational& r) const {
    Poly p;
    p.terms_ = map_scale(terms_, r);
    return p;
}

Poly Poly::derivative(std::uint32_t coord) const {
    Poly r;
    for (const auto& [mono, coeff] : terms_) {
        for (std::size_t k = 0; k < mono.size(); ++k) {
            const auto [atom, exp] = mono[k];
            if (atom_coord(atom) != coord) continue;
            Monomial rest;
            for (std::size_t j = 0; j < mono.size(); ++j) {
                if (j == k) continue;
                rest.push_back(mono[j]);
            }
            switch (atom_kind(atom)) {
                case AtomKind::Var: {
                    Monomial m = rest;
                    if (exp > 1) m = mono_mul(m, Monomial{{atom, exp - 1}});
                    r.add_term(m, coeff * Rational(exp));
                    break;
                }
                case AtomKind::Sin: {
                    // exp is 1 in canonical form
                    Monomial m = mono_mul(rest, Monomial{{make_atom(coord, AtomKind::Cos), 1}});
                    r.add_term(m, coeff * Rational(exp));
                    break;
                }
                case AtomKind::Cos: {
                    Monomial m = rest;
                    if (exp > 1) m = mono_mul(m, Monomial{{atom, exp - 1}});
                    m = mono_mul(m, Monomial{{make_atom(coord, AtomKind::Sin), 1}});
                    r.add_term(m, -coeff * Rational(exp));
                    break;
                }
            }
        }
    }
    r.reduce_trig();
    return r;
}

double Poly::eval(const std::vector<double>& point) const {
    double total = 0.0;
    for (const auto& [mono, coeff] : terms_) {
        double v = to_double(coeff);
        for (const auto& [atom, exp] : mono) {
            double x = point.at(atom_coord(atom));
            double base = 0.0;
            switch (atom_kind(atom)) {
                case AtomKind::Var: base = x; break;
                case AtomKind::Sin: base = std::sin(x); break;
                case AtomKind::Cos: base = std::cos(x); break;
            }
            for (std::uint32_t e = 0; e < exp; ++e) v *= base;
        }
        total += v;
    }
    return total;
}

const Monomial& Poly::leading_monomial() const { return terms_.rbegin()->first; }
const Rational& Poly::leading_coefficient() const { return terms_.rbegin()->second; }

bool Poly::max_atom(Atom& out) const {
    if (map_is_constant(terms_)) return false;
    out = map_max_atom(terms_);
    return true;
}

std::uint32_t Poly::degree_in(Atom a) const { return map_degree_in(terms_, a); }

Rational Poly::content() const { return map_content(terms_); }

std::vector<Atom> Poly::atoms() const {
    std::vector<Atom> out;
    for (const auto& [mono, c] : terms_)
        for (const auto& p : mono) out.push_back(p.first);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string Poly::to_string(const std::vector<std::string>& coord_names) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    // Leading term first.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [mono, coeff] = *it;
        Rational c = coeff;
        if (first) {
            if (c < 0) {
                out += "-";
                c = -c;
            }
        } else {
            out += (c < 0) ? " - " : " + ";
            if (c < 0) c = -c;
        }
        first = false;
        std::string factors;
        for (const auto& [atom, exp] : mono) {
            const std::string& name = coord_names.at(atom_coord(atom));
            std::string f;
            switch (atom_kind(atom)) {
                case AtomKind::Var: f = name; break;
                case AtomKind::Sin: f = "sin(" + name + ")"; break;
                case AtomKind::Cos: f = "cos(" + name + ")"; break;
            }
            for (std::uint32_t e = 0; e < exp; ++e) {
                if (!factors.empty()) factors += "*";
                factors += f;
            }
        }
        if (factors.empty()) {
            out += rational_to_string(c);
        } else if (c == 1) {
            out += factors;
        } else {
            out += rational_to_string(c) + "*" + factors;
        }
    }
    return out;
}

Poly poly_gcd(const Poly& a, const Poly& b) { return Poly(map_gcd(a.terms(), b.terms())); }

Poly poly_div_exact(const Poly& a, const Poly& b) {
    return Poly(map_div_exact(a.terms(), b.terms()));
}

}  // namespace qs3
