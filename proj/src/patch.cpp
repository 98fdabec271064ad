#include "qs3/patch.hpp"

#include <algorithm>

namespace qs3 {

PatchPtr FramedPatch::coordinate(std::vector<std::string> coords,
                                 std::vector<std::string> frame_names, SMatrix frame,
                                 std::vector<ScalarExpr> excluded_locus) {
    auto p = std::shared_ptr<FramedPatch>(new FramedPatch());
    p->mode_ = Mode::Coordinate;
    p->coords_ = std::move(coords);
    p->frame_names_ = std::move(frame_names);
    p->frame_ = std::move(frame);
    p->excluded_ = std::move(excluded_locus);
    const std::size_t m = p->frame_names_.size();
    if (m != p->coords_.size() || m == 0)
        throw Error(ErrorCode::DimensionMismatch,
                    "coordinate-mode frame must be square in the coordinates");
    for (const auto& row : p->frame_)
        if (row.size() != m) throw Error(ErrorCode::DimensionMismatch, "ragged frame matrix");
    if (smat_det(p->frame_).is_zero())
        throw Error(ErrorCode::FrameSolveFailure,
                    "frame fields are not pointwise linearly independent");
    p->frame_inv_ = smat_inverse(p->frame_, ErrorCode::FrameSolveFailure, "frame matrix singular");

    // Frame bracket coefficients via the coordinate formula, re-expanded in
    // the frame: [E_a,E_b]^j = E_a^i d_i E_b^j - E_b^i d_i E_a^j.
    p->bracket_.assign(m, std::vector<std::vector<ScalarExpr>>(m, std::vector<ScalarExpr>(m)));
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            if (b == a) continue;
            std::vector<ScalarExpr> w(m);
            for (std::size_t j = 0; j < m; ++j) {
                ScalarExpr acc;
                for (std::size_t i = 0; i < m; ++i) {
                    acc += p->frame_[a][i] * p->frame_[b][j].diff(static_cast<std::uint32_t>(i));
                    acc -= p->frame_[b][i] * p->frame_[a][j].diff(static_cast<std::uint32_t>(i));
                }
                w[j] = acc;
            }
            for (std::size_t c = 0; c < m; ++c) {
                ScalarExpr acc;
                for (std::size_t j = 0; j < m; ++j) acc += w[j] * p->frame_inv_[j][c];
                p->bracket_[a][b][c] = acc;
            }
        }
    }
    return p;
}

PatchPtr FramedPatch::abstract_frame(std::vector<std::string> frame_names,
                                     std::vector<std::vector<std::vector<ScalarExpr>>> bracket) {
    auto p = std::shared_ptr<FramedPatch>(new FramedPatch());
    p->mode_ = Mode::Abstract;
    p->frame_names_ = std::move(frame_names);
    p->bracket_ = std::move(bracket);
    const std::size_t m = p->frame_names_.size();
    if (m == 0) throw Error(ErrorCode::DimensionMismatch, "empty frame");
    if (p->bracket_.size() != m)
        throw Error(ErrorCode::DimensionMismatch, "bracket table size mismatch");
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            if (p->bracket_[a][b].size() != m)
                throw Error(ErrorCode::DimensionMismatch, "bracket table size mismatch");
            for (std::size_t c = 0; c < m; ++c) {
                const ScalarExpr& e = p->bracket_[a][b][c];
                if (!e.is_zero() && !e.is_rational())
                    throw Error(ErrorCode::NonConstantAbstractCoefficient,
                                "abstract bracket constants must be rational");
                if (!(e + p->bracket_[b][a][c]).is_zero())
                    throw Error(ErrorCode::DimensionMismatch,
                                "bracket table is not antisymmetric");
            }
        }
    return p;
}

ScalarExpr FramedPatch::frame_direct(std::size_t a, const ScalarExpr& f) const {
    if (mode_ == Mode::Abstract) {
        if (f.is_rational()) return ScalarExpr();
        throw Error(ErrorCode::NonConstantAbstractCoefficient,
                    "cannot differentiate a non-constant scalar on an abstract frame");
    }
    ScalarExpr acc;
    for (std::size_t i = 0; i < coords_.size(); ++i)
        acc += frame_[a][i] * f.diff(static_cast<std::uint32_t>(i));
    return acc;
}

std::vector<ScalarExpr> FramedPatch::jacobi_residual(std::size_t a, std::size_t b,
                                                     std::size_t c) const {
    const std::size_t m = dim();
    std::vector<ScalarExpr> res(m);
    auto add_double_bracket = [&](std::size_t x, std::size_t y, std::size_t z) {
        // [[x,y],z] expanded: sum_d C(x,y)^d ( C(d,z) + derivative terms ).
        const auto& inner = bracket_[x][y];
        for (std::size_t d = 0; d < m; ++d) {
            if (inner[d].is_zero()) continue;
            for (std::size_t e = 0; e < m; ++e) res[e] += inner[d] * bracket_[d][z][e];
        }
        // Non-constant structure functions contribute z-derivatives.
        if (mode_ == Mode::Coordinate)
            for (std::size_t e = 0; e < m; ++e) res[e] -= frame_direct(z, inner[e]);
    };
    add_double_bracket(a, b, c);
    add_double_bracket(b, c, a);
    add_double_bracket(c, a, b);
    return res;
}

Tensor::Tensor(PatchPtr patch, int up, int down) : patch_(std::move(patch)), up_(up), down_(down) {
    std::size_t n = 1;
    for (int k = 0; k < up_ + down_; ++k) n *= patch_->dim();
    comp_.assign(n, ScalarExpr());
}

Tensor Tensor::frame_field(PatchPtr p, std::size_t a) {
    Tensor t(std::move(p), 1, 0);
    t.comp_[a] = ScalarExpr::from_int(1);
    return t;
}

Tensor Tensor::coframe_field(PatchPtr p, std::size_t a) {
    Tensor t(std::move(p), 0, 1);
    t.comp_[a] = ScalarExpr::from_int(1);
    return t;
}

Tensor Tensor::coordinate_field(PatchPtr p, std::size_t i) {
    if (p->mode() != FramedPatch::Mode::Coordinate)
        throw Error(ErrorCode::NonConstantAbstractCoefficient,
                    "coordinate fields need a coordinate chart");
    Tensor t(p, 1, 0);
    for (std::size_t a = 0; a < p->dim(); ++a) t.comp_[a] = p->frame_matrix_inverse()[i][a];
    return t;
}

Tensor Tensor::coordinate_coform(PatchPtr p, std::size_t i) {
    if (p->mode() != FramedPatch::Mode::Coordinate)
        throw Error(ErrorCode::NonConstantAbstractCoefficient,
                    "coordinate differentials need a coordinate chart");
    Tensor t(p, 0, 1);
    for (std::size_t a = 0; a < p->dim(); ++a) t.comp_[a] = p->frame_matrix()[a][i];
    return t;
}

std::size_t Tensor::flatten(std::span<const std::size_t> idx) const {
    if (static_cast<int>(idx.size()) != order())
        throw Error(ErrorCode::ValenceMismatch, "index count does not match tensor valence");
    std::size_t flat = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) flat = flat * patch_->dim() + idx[k];
    return flat;
}

std::vector<std::size_t> Tensor::unflatten(std::size_t flat) const {
    std::vector<std::size_t> idx(order());
    for (int k = order() - 1; k >= 0; --k) {
        idx[k] = flat % patch_->dim();
        flat /= patch_->dim();
    }
    return idx;
}

bool Tensor::is_zero_tensor() const {
    return std::all_of(comp_.begin(), comp_.end(), [](const ScalarExpr& e) { return e.is_zero(); });
}

std::optional<std::vector<std::size_t>> Tensor::first_nonzero() const {
    for (std::size_t i = 0; i < comp_.size(); ++i)
        if (!comp_[i].is_zero()) return unflatten(i);
    return std::nullopt;
}

Tensor Tensor::operator+(const Tensor& o) const {
    if (patch_ != o.patch_ || up_ != o.up_ || down_ != o.down_)
        throw Error(ErrorCode::ValenceMismatch, "tensor shape mismatch in +");
    Tensor r = *this;
    for (std::size_t i = 0; i < comp_.size(); ++i) r.comp_[i] += o.comp_[i];
    return r;
}

Tensor Tensor::operator-(const Tensor& o) const {
    if (patch_ != o.patch_ || up_ != o.up_ || down_ != o.down_)
        throw Error(ErrorCode::ValenceMismatch, "tensor shape mismatch in -");
    Tensor r = *this;
    for (std::size_t i = 0; i < comp_.size(); ++i) r.comp_[i] -= o.comp_[i];
    return r;
}

Tensor Tensor::operator-() const {
    Tensor r = *this;
    for (auto& c : r.comp_) c = -c;
    return r;
}

Tensor Tensor::scaled(const ScalarExpr& f) const {
    Tensor r = *this;
    for (auto& c : r.comp_) c = f * c;
    return r;
}

const ScalarExpr& Tensor::as_scalar() const {
    if (order() != 0) throw Error(ErrorCode::ValenceMismatch, "tensor is not a scalar");
    return comp_[0];
}

Tensor Tensor::apply(std::span<const Tensor* const> vectors) const {
    if (static_cast<int>(vectors.size()) != down_)
        throw Error(ErrorCode::ValenceMismatch, "apply: argument count must equal the covariant valence");
    for (const Tensor* v : vectors)
        if (v->up() != 1 || v->down() != 0 || v->patch() != patch_)
            throw Error(ErrorCode::ValenceMismatch, "apply: arguments must be vector fields on the same patch");
    const std::size_t m = patch_->dim();
    Tensor out(patch_, up_, 0);
    std::size_t up_count = static_cast<std::size_t>(up_);
    std::size_t out_size = out.comp_.size();
    for (std::size_t uflat = 0; uflat < out_size; ++uflat) {
        // Sum over all covariant index tuples.
        std::vector<std::size_t> idx(order(), 0);
        std::size_t tmp = uflat;
        for (int k = static_cast<int>(up_count) - 1; k >= 0; --k) {
            idx[k] = tmp % m;
            tmp /= m;
        }
        ScalarExpr acc;
        std::vector<std::size_t> d(down_, 0);
        for (;;) {
            ScalarExpr term = ScalarExpr::from_int(1);
            bool zero = false;
            for (int k = 0; k < down_; ++k) {
                const ScalarExpr& vc = vectors[k]->comp_[d[k]];
                if (vc.is_zero()) {
                    zero = true;
                    break;
                }
                term = term * vc;
            }
            if (!zero) {
                for (int k = 0; k < down_; ++k) idx[up_count + k] = d[k];
                const ScalarExpr& tc = at(idx);
                if (!tc.is_zero()) acc += term * tc;
            }
            int k = down_ - 1;
            while (k >= 0 && ++d[k] == m) d[k--] = 0;
            if (k < 0) break;
        }
        out.comp_[uflat] = acc;
    }
    return out;
}

Tensor Tensor::apply(const Tensor& x) const {
    const Tensor* args[] = {&x};
    return apply(std::span<const Tensor* const>(args, 1));
}

Tensor Tensor::apply(const Tensor& x, const Tensor& y) const {
    const Tensor* args[] = {&x, &y};
    return apply(std::span<const Tensor* const>(args, 2));
}

Tensor endo_compose(const Tensor& a, const Tensor& b) {
    if (a.up() != 1 || a.down() != 1 || b.up() != 1 || b.down() != 1 || a.patch() != b.patch())
        throw Error(ErrorCode::ValenceMismatch, "endo_compose needs two (1,1) tensors");
    const std::size_t m = a.dim();
    Tensor r = Tensor::endo(a.patch());
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            ScalarExpr acc;
            for (std::size_t k = 0; k < m; ++k) {
                if (a(i, k).is_zero() || b(k, j).is_zero()) continue;
                acc += a(i, k) * b(k, j);
            }
            r.set(i, j) = acc;
        }
    return r;
}

Tensor outer_vector_form(const Tensor& xi, const Tensor& eta) {
    if (xi.up() != 1 || xi.down() != 0 || eta.up() != 0 || eta.down() != 1 ||
        xi.patch() != eta.patch())
        throw Error(ErrorCode::ValenceMismatch, "outer_vector_form needs a vector and a one-form");
    const std::size_t m = xi.dim();
    Tensor r = Tensor::endo(xi.patch());
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) r.set(i, j) = xi(i) * eta(j);
    return r;
}

Tensor outer_form_form(const Tensor& a, const Tensor& b) {
    if (a.up() != 0 || a.down() != 1 || b.up() != 0 || b.down() != 1 || a.patch() != b.patch())
        throw Error(ErrorCode::ValenceMismatch, "outer_form_form needs two one-forms");
    const std::size_t m = a.dim();
    Tensor r = Tensor::bilinear(a.patch());
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) r.set(i, j) = a(i) * b(j);
    return r;
}

Tensor bracket(const Tensor& x, const Tensor& y) {
    if (x.patch() != y.patch()) throw Error(ErrorCode::PatchMismatch, "bracket across patches");
    if (x.up() != 1 || x.down() != 0 || y.up() != 1 || y.down() != 0)
        throw Error(ErrorCode::ValenceMismatch, "bracket needs vector fields");
    const auto& patch = *x.patch();
    const std::size_t m = patch.dim();
    Tensor r = Tensor::vector_field(x.patch());
    // [X,Y] = X(Y^b) E_b - Y(X^a) E_a + X^a Y^b [E_a, E_b]
    for (std::size_t b = 0; b < m; ++b) {
        ScalarExpr acc = direct(x, y(b)) - direct(y, x(b));
        for (std::size_t i = 0; i < m; ++i) {
            if (x(i).is_zero()) continue;
            for (std::size_t j = 0; j < m; ++j) {
                if (y(j).is_zero()) continue;
                const ScalarExpr& c = patch.bracket_coeff(i, j)[b];
                if (!c.is_zero()) acc += x(i) * y(j) * c;
            }
        }
        r.set(b) = acc;
    }
    return r;
}

ScalarExpr direct(const Tensor& x, const ScalarExpr& f) {
    if (x.up() != 1 || x.down() != 0)
        throw Error(ErrorCode::ValenceMismatch, "direct needs a vector field");
    const auto& patch = *x.patch();
    if (patch.mode() == FramedPatch::Mode::Abstract) {
        if (f.is_rational()) return ScalarExpr();
        throw Error(ErrorCode::NonConstantAbstractCoefficient,
                    "cannot differentiate a non-constant scalar on an abstract frame");
    }
    ScalarExpr acc;
    for (std::size_t a = 0; a < patch.dim(); ++a) {
        if (x(a).is_zero()) continue;
        acc += x(a) * patch.frame_direct(a, f);
    }
    return acc;
}

Metric::Metric(Tensor g) : g_(std::move(g)) {
    if (g_.up() != 0 || g_.down() != 2)
        throw Error(ErrorCode::ValenceMismatch, "metric must be a (0,2) tensor");
    const std::size_t m = g_.dim();
    SMatrix mat(m, std::vector<ScalarExpr>(m));
    identity_ = true;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            if (!(g_(i, j) - g_(j, i)).is_zero())
                throw Error(ErrorCode::SingularMetric, "metric components are not symmetric");
            mat[i][j] = g_(i, j);
            ScalarExpr expect = (i == j) ? ScalarExpr::from_int(1) : ScalarExpr();
            if (!(mat[i][j] - expect).is_zero()) identity_ = false;
        }
    if (smat_det(mat).is_zero())
        throw Error(ErrorCode::SingularMetric, "metric determinant is identically zero");
    inv_ = identity_ ? smat_identity(m) : smat_inverse(mat, ErrorCode::SingularMetric, "metric not invertible");
}

ScalarExpr Metric::pair(const Tensor& x, const Tensor& y) const {
    return g_.apply(x, y).as_scalar();
}

Tensor Metric::flat(const Tensor& x) const {
    if (x.up() != 1 || x.down() != 0)
        throw Error(ErrorCode::ValenceMismatch, "flat needs a vector field");
    const std::size_t m = g_.dim();
    Tensor r = Tensor::one_form(x.patch());
    for (std::size_t j = 0; j < m; ++j) {
        ScalarExpr acc;
        for (std::size_t i = 0; i < m; ++i) {
            if (x(i).is_zero() || g_(i, j).is_zero()) continue;
            acc += x(i) * g_(i, j);
        }
        r.set(j) = acc;
    }
    return r;
}

std::string render_vector(const Tensor& v) {
    const auto& names = v.patch()->frame_names();
    const auto& coords = v.patch()->coords();
    std::string out;
    for (std::size_t a = 0; a < v.dim(); ++a) {
        const ScalarExpr& c = v(a);
        if (c.is_zero()) continue;
        std::string cs = c.to_string(coords);
        std::string term;
        if (cs == "1") {
            term = names[a];
        } else if (cs == "-1") {
            term = "-" + names[a];
        } else {
            bool simple = cs.find_first_of("+-") == std::string::npos ||
                          (cs[0] == '-' && cs.find_first_of("+-", 1) == std::string::npos);
            term = (simple ? cs : "(" + cs + ")") + "*" + names[a];
        }
        if (out.empty()) {
            out = term;
        } else if (!term.empty() && term[0] == '-') {
            out += " - " + term.substr(1);
        } else {
            out += " + " + term;
        }
    }
    return out.empty() ? "0" : out;
}

std::string render_scalar(const ScalarExpr& e, const FramedPatch& patch) {
    return e.to_string(patch.coords());
}

}  // namespace qs3
