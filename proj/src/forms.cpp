#include "qs3/forms.hpp"

#include "qs3/par.hpp"

#include <algorithm>

namespace qs3 {

namespace {

std::size_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Sign of sorting a tuple; false when an index repeats.
bool sort_with_sign(std::vector<std::size_t>& t, int& sign) {
    sign = 1;
    for (std::size_t i = 1; i < t.size(); ++i)
        for (std::size_t j = i; j > 0 && t[j - 1] >= t[j]; --j) {
            if (t[j - 1] == t[j]) return false;
            std::swap(t[j - 1], t[j]);
            sign = -sign;
        }
    return true;
}

}  // namespace

PForm::PForm(PatchPtr patch, int degree) : patch_(std::move(patch)), degree_(degree) {
    comp_.assign(tuple_count(patch_->dim(), degree), ScalarExpr());
}

PForm PForm::from_scalar(PatchPtr patch, ScalarExpr f) {
    PForm r(std::move(patch), 0);
    r.comp_[0] = std::move(f);
    return r;
}

PForm PForm::from_one_form(const Tensor& omega) {
    if (omega.up() != 0 || omega.down() != 1)
        throw Error(ErrorCode::ValenceMismatch, "expected a one-form");
    PForm r(omega.patch(), 1);
    for (std::size_t a = 0; a < omega.dim(); ++a) r.comp_[a] = omega(a);
    return r;
}

std::size_t PForm::tuple_count(std::size_t m, int p) {
    if (p < 0) return 0;
    return binomial(m, static_cast<std::size_t>(p));
}

std::size_t PForm::rank_tuple(std::size_t m, std::span<const std::size_t> tuple) {
    // Combinadic rank in lexicographic tuple order.
    std::size_t rank = 0;
    std::size_t prev = 0;
    int p = static_cast<int>(tuple.size());
    for (int k = 0; k < p; ++k) {
        for (std::size_t v = prev; v < tuple[k]; ++v) rank += binomial(m - v - 1, p - k - 1);
        prev = tuple[k] + 1;
    }
    return rank;
}

std::vector<std::size_t> PForm::unrank_tuple(std::size_t m, int p, std::size_t rank) {
    std::vector<std::size_t> t(p);
    std::size_t v = 0;
    for (int k = 0; k < p; ++k) {
        for (;; ++v) {
            std::size_t block = binomial(m - v - 1, p - k - 1);
            if (rank < block) break;
            rank -= block;
        }
        t[k] = v++;
    }
    return t;
}

const ScalarExpr& PForm::at_sorted(std::span<const std::size_t> tuple) const {
    return comp_[rank_tuple(patch_->dim(), tuple)];
}

ScalarExpr& PForm::at_sorted(std::span<const std::size_t> tuple) {
    return comp_[rank_tuple(patch_->dim(), tuple)];
}

ScalarExpr PForm::eval_frame(std::span<const std::size_t> tuple) const {
    if (static_cast<int>(tuple.size()) != degree_)
        throw Error(ErrorCode::ValenceMismatch, "form argument count mismatch");
    std::vector<std::size_t> t(tuple.begin(), tuple.end());
    int sign = 1;
    if (!sort_with_sign(t, sign)) return ScalarExpr();
    const ScalarExpr& v = at_sorted(t);
    return sign > 0 ? v : -v;
}

ScalarExpr PForm::eval_fields(std::span<const Tensor* const> vectors) const {
    if (static_cast<int>(vectors.size()) != degree_)
        throw Error(ErrorCode::ValenceMismatch, "form argument count mismatch");
    const std::size_t m = dim();
    ScalarExpr acc;
    std::vector<std::size_t> idx(degree_, 0);
    if (degree_ == 0) return comp_[0];
    for (;;) {
        ScalarExpr term = ScalarExpr::from_int(1);
        bool zero = false;
        for (int k = 0; k < degree_ && !zero; ++k) {
            const ScalarExpr& c = (*vectors[k])(idx[k]);
            if (c.is_zero()) zero = true;
            else term = term * c;
        }
        if (!zero) {
            ScalarExpr v = eval_frame(idx);
            if (!v.is_zero()) acc += term * v;
        }
        int k = degree_ - 1;
        while (k >= 0 && ++idx[k] == m) idx[k--] = 0;
        if (k < 0) break;
    }
    return acc;
}

PForm PForm::operator+(const PForm& o) const {
    if (patch_ != o.patch_ || degree_ != o.degree_)
        throw Error(ErrorCode::ValenceMismatch, "form degree mismatch in +");
    PForm r = *this;
    for (std::size_t i = 0; i < comp_.size(); ++i) r.comp_[i] += o.comp_[i];
    return r;
}

PForm PForm::operator-(const PForm& o) const {
    if (patch_ != o.patch_ || degree_ != o.degree_)
        throw Error(ErrorCode::ValenceMismatch, "form degree mismatch in -");
    PForm r = *this;
    for (std::size_t i = 0; i < comp_.size(); ++i) r.comp_[i] -= o.comp_[i];
    return r;
}

PForm PForm::operator-() const {
    PForm r = *this;
    for (auto& c : r.comp_) c = -c;
    return r;
}

PForm PForm::scaled(const ScalarExpr& f) const {
    PForm r = *this;
    for (auto& c : r.comp_) c = f * c;
    return r;
}

bool PForm::is_zero_form() const {
    return std::all_of(comp_.begin(), comp_.end(), [](const ScalarExpr& e) { return e.is_zero(); });
}

std::optional<std::vector<std::size_t>> PForm::first_nonzero_tuple() const {
    for (std::size_t i = 0; i < comp_.size(); ++i)
        if (!comp_[i].is_zero()) return unrank_tuple(dim(), degree_, i);
    return std::nullopt;
}

Tensor PForm::to_tensor() const {
    Tensor t(patch_, 0, degree_);
    const std::size_t m = dim();
    std::vector<std::size_t> idx(degree_, 0);
    if (degree_ == 0) {
        t.components()[0] = comp_[0];
        return t;
    }
    for (;;) {
        t.at(idx) = eval_frame(idx);
        int k = degree_ - 1;
        while (k >= 0 && ++idx[k] == m) idx[k--] = 0;
        if (k < 0) break;
    }
    return t;
}

PForm wedge(const PForm& a, const PForm& b) {
    if (a.patch() != b.patch()) throw Error(ErrorCode::PatchMismatch, "wedge across patches");
    const std::size_t m = a.dim();
    int p = a.degree(), q = b.degree();
    // Beyond top degree the form has no components and is identically zero.
    if (p + q > static_cast<int>(m)) return PForm(a.patch(), p + q);
    PForm r(a.patch(), p + q);
    const Rational weight(1, static_cast<long long>(binomial(static_cast<std::size_t>(p + q),
                                                             static_cast<std::size_t>(p))));
    par::for_each_index(r.component_count(), [&](std::size_t rank) {
        std::vector<std::size_t> tuple = PForm::unrank_tuple(m, p + q, rank);
        ScalarExpr acc;
        // Iterate p-subsets of positions via bitmask combinations.
        std::vector<int> pick(p);
        for (int i = 0; i < p; ++i) pick[i] = i;
        for (;;) {
            std::vector<std::size_t> ta, tb;
            ta.reserve(p);
            tb.reserve(q);
            int sign_exp = 0;
            std::size_t pi = 0;
            for (int pos = 0; pos < p + q; ++pos) {
                if (pi < pick.size() && pick[pi] == pos) {
                    // inversions contributed by moving this element to the front block
                    sign_exp += pos - static_cast<int>(pi);
                    ta.push_back(tuple[pos]);
                    ++pi;
                } else {
                    tb.push_back(tuple[pos]);
                }
            }
            const ScalarExpr& va = a.at_sorted(ta);
            if (!va.is_zero()) {
                const ScalarExpr& vb = b.at_sorted(tb);
                if (!vb.is_zero()) {
                    ScalarExpr t = va * vb;
                    acc += (sign_exp % 2 == 0) ? t : -t;
                }
            }
            // next combination
            int i = p - 1;
            while (i >= 0 && pick[i] == i + q) --i;
            if (i < 0) break;
            ++pick[i];
            for (int j = i + 1; j < p; ++j) pick[j] = pick[j - 1] + 1;
        }
        r.component(rank) = weight * acc;
    });
    return r;
}

PForm ext_d(const PForm& omega) {
    const auto& patch = omega.patch();
    const std::size_t m = omega.dim();
    int p = omega.degree();
    if (p >= static_cast<int>(m)) return PForm(patch, p + 1);
    PForm r(patch, p + 1);
    const Rational weight(1, p + 1);
    par::for_each_index(r.component_count(), [&](std::size_t rank) {
        std::vector<std::size_t> tuple = PForm::unrank_tuple(m, p + 1, rank);
        ScalarExpr acc;
        // sum_i (-1)^i E_i ( omega(..hat i..) )
        for (int i = 0; i <= p; ++i) {
            std::vector<std::size_t> rest;
            rest.reserve(p);
            for (int k = 0; k <= p; ++k)
                if (k != i) rest.push_back(tuple[k]);
            ScalarExpr der = patch->frame_direct(tuple[i], omega.at_sorted(rest));
            if (!der.is_zero()) acc += (i % 2 == 0) ? der : -der;
        }
        // sum_{i<j} (-1)^{i+j} omega([E_i,E_j], ..rest..)
        if (p >= 1) {
            for (int i = 0; i <= p; ++i)
                for (int j = i + 1; j <= p; ++j) {
                    const auto& coeffs = patch->bracket_coeff(tuple[i], tuple[j]);
                    std::vector<std::size_t> rest;
                    rest.reserve(p);
                    rest.push_back(0);  // placeholder for the bracket leg
                    for (int k = 0; k <= p; ++k)
                        if (k != i && k != j) rest.push_back(tuple[k]);
                    ScalarExpr sum;
                    for (std::size_t c = 0; c < m; ++c) {
                        if (coeffs[c].is_zero()) continue;
                        rest[0] = c;
                        ScalarExpr v = omega.eval_frame(rest);
                        if (!v.is_zero()) sum += coeffs[c] * v;
                    }
                    if (!sum.is_zero()) acc += ((i + j) % 2 == 0) ? sum : -sum;
                }
        }
        r.component(rank) = weight * acc;
    });
    return r;
}

PForm interior(const Tensor& x, const PForm& omega) {
    if (x.patch() != omega.patch()) throw Error(ErrorCode::PatchMismatch, "interior across patches");
    int p = omega.degree();
    if (p < 1) throw Error(ErrorCode::ValenceMismatch, "interior product needs degree >= 1");
    const std::size_t m = omega.dim();
    PForm r(omega.patch(), p - 1);
    const Rational weight(p);
    for (std::size_t rank = 0; rank < r.component_count(); ++rank) {
        std::vector<std::size_t> rest = PForm::unrank_tuple(m, p - 1, rank);
        std::vector<std::size_t> full(p);
        std::copy(rest.begin(), rest.end(), full.begin() + 1);
        ScalarExpr acc;
        for (std::size_t a = 0; a < m; ++a) {
            if (x(a).is_zero()) continue;
            full[0] = a;
            ScalarExpr v = omega.eval_frame(full);
            if (!v.is_zero()) acc += x(a) * v;
        }
        r.component(rank) = weight * acc;
    }
    return r;
}

PForm lie_form(const Tensor& x, const PForm& omega) {
    if (omega.degree() == 0)
        return PForm::from_scalar(omega.patch(), direct(x, omega.component(0)));
    return interior(x, ext_d(omega)) + ext_d(interior(x, omega));
}

PForm lie_form_bracket(const Tensor& x, const PForm& omega) {
    // (L_X w)(Y_1..Y_p) = X(w(Y..)) - sum_k w(.., [X, Y_k], ..)
    const auto& patch = omega.patch();
    const std::size_t m = omega.dim();
    int p = omega.degree();
    if (p == 0) return PForm::from_scalar(patch, direct(x, omega.component(0)));
    PForm r(patch, p);
    for (std::size_t rank = 0; rank < r.component_count(); ++rank) {
        std::vector<std::size_t> tuple = PForm::unrank_tuple(m, p, rank);
        ScalarExpr acc = direct(x, omega.at_sorted(tuple));
        for (int k = 0; k < p; ++k) {
            Tensor xy = bracket(x, Tensor::frame_field(patch, tuple[k]));
            std::vector<std::size_t> probe(tuple.begin(), tuple.end());
            for (std::size_t c = 0; c < m; ++c) {
                if (xy(c).is_zero()) continue;
                probe[k] = c;
                ScalarExpr v = omega.eval_frame(probe);
                if (!v.is_zero()) acc -= xy(c) * v;
            }
        }
        r.component(rank) = acc;
    }
    return r;
}

Tensor lie_vector(const Tensor& x, const Tensor& y) { return bracket(x, y); }

Tensor lie_endo(const Tensor& x, const Tensor& t) {
    if (t.up() != 1 || t.down() != 1)
        throw Error(ErrorCode::ValenceMismatch, "lie_endo needs a (1,1) tensor");
    const auto& patch = t.patch();
    const std::size_t m = t.dim();
    Tensor r = Tensor::endo(patch);
    for (std::size_t b = 0; b < m; ++b) {
        Tensor eb = Tensor::frame_field(patch, b);
        Tensor teb = t.apply(eb);
        Tensor v = bracket(x, teb) - t.apply(bracket(x, eb));
        for (std::size_t a = 0; a < m; ++a) r.set(a, b) = v(a);
    }
    return r;
}

Tensor lie_bilinear(const Tensor& x, const Tensor& g) {
    if (g.up() != 0 || g.down() != 2)
        throw Error(ErrorCode::ValenceMismatch, "lie_bilinear needs a (0,2) tensor");
    const auto& patch = g.patch();
    const std::size_t m = g.dim();
    Tensor r = Tensor::bilinear(patch);
    std::vector<Tensor> xe(m);
    for (std::size_t a = 0; a < m; ++a) xe[a] = bracket(x, Tensor::frame_field(patch, a));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            ScalarExpr acc = direct(x, g(a, b));
            for (std::size_t c = 0; c < m; ++c) {
                if (!xe[a](c).is_zero()) acc -= xe[a](c) * g(c, b);
                if (!xe[b](c).is_zero()) acc -= g(a, c) * xe[b](c);
            }
            r.set(a, b) = acc;
        }
    return r;
}

}  // namespace qs3
