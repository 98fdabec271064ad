#include "qs3/riemann.hpp"

#include "qs3/par.hpp"

namespace qs3 {

Connection::Connection(PatchPtr patch, std::vector<ScalarExpr> gamma)
    : patch_(std::move(patch)), gamma_(std::move(gamma)) {
    const std::size_t m = patch_->dim();
    if (gamma_.size() != m * m * m)
        throw Error(ErrorCode::DimensionMismatch, "connection coefficient table size");
}

Tensor Connection::nabla_frame(std::size_t a, const Tensor& y) const {
    if (y.up() != 1 || y.down() != 0)
        throw Error(ErrorCode::ValenceMismatch, "nabla_frame expects a vector field");
    const std::size_t m = dim();
    Tensor r = Tensor::vector_field(patch_);
    for (std::size_t c = 0; c < m; ++c) {
        ScalarExpr acc = patch_->frame_direct(a, y(c));
        for (std::size_t b = 0; b < m; ++b) {
            if (y(b).is_zero()) continue;
            const ScalarExpr& gam = gamma(a, b, c);
            if (!gam.is_zero()) acc += y(b) * gam;
        }
        r.set(c) = acc;
    }
    return r;
}

Tensor Connection::nabla(const Tensor& x, const Tensor& t) const {
    if (x.patch() != patch_ || t.patch() != patch_)
        throw Error(ErrorCode::PatchMismatch, "nabla across patches");
    const std::size_t m = dim();
    const int r_up = t.up(), r_down = t.down();
    Tensor out(patch_, r_up, r_down);
    const std::size_t total = out.components().size();
    par::for_each_index(total, [&](std::size_t flat) {
        std::vector<std::size_t> idx = out.unflatten(flat);
        ScalarExpr acc = direct(x, t.at(idx));
        for (std::size_t a = 0; a < m; ++a) {
            if (x(a).is_zero()) continue;
            // contravariant slots pick up +Gamma, covariant slots -Gamma
            for (int k = 0; k < r_up; ++k) {
                std::vector<std::size_t> j = idx;
                for (std::size_t e = 0; e < m; ++e) {
                    const ScalarExpr& gam = gamma(a, e, idx[k]);
                    if (gam.is_zero()) continue;
                    j[k] = e;
                    const ScalarExpr& tv = t.at(j);
                    if (!tv.is_zero()) acc += x(a) * gam * tv;
                }
            }
            for (int k = 0; k < r_down; ++k) {
                std::vector<std::size_t> j = idx;
                for (std::size_t e = 0; e < m; ++e) {
                    const ScalarExpr& gam = gamma(a, idx[r_up + k], e);
                    if (gam.is_zero()) continue;
                    j[r_up + k] = e;
                    const ScalarExpr& tv = t.at(j);
                    if (!tv.is_zero()) acc -= x(a) * gam * tv;
                }
            }
        }
        out.components()[flat] = acc;
    });
    return out;
}

Connection levi_civita(const Metric& g) {
    const auto& patch = g.patch();
    const std::size_t m = patch->dim();
    const Tensor& gt = g.tensor();
    // 2 g(nabla_a E_b, E_c) = E_a g_bc + E_b g_ac - E_c g_ab
    //                         + g([E_a,E_b],E_c) + g([E_c,E_a],E_b) - g([E_b,E_c],E_a)
    std::vector<ScalarExpr> k(m * m * m);
    par::for_each_index(m * m, [&](std::size_t ab) {
        std::size_t a = ab / m, b = ab % m;
        for (std::size_t c = 0; c < m; ++c) {
            ScalarExpr acc = patch->frame_direct(a, gt(b, c)) + patch->frame_direct(b, gt(a, c)) -
                             patch->frame_direct(c, gt(a, b));
            auto bracket_pair = [&](std::size_t x, std::size_t y, std::size_t z) {
                ScalarExpr s;
                const auto& coeffs = patch->bracket_coeff(x, y);
                for (std::size_t d = 0; d < m; ++d) {
                    if (coeffs[d].is_zero() || gt(d, z).is_zero()) continue;
                    s += coeffs[d] * gt(d, z);
                }
                return s;
            };
            acc += bracket_pair(a, b, c);
            acc += bracket_pair(c, a, b);
            acc -= bracket_pair(b, c, a);
            k[(a * m + b) * m + c] = ScalarExpr::from_rational(Rational(1, 2)) * acc;
        }
    });
    std::vector<ScalarExpr> gamma(m * m * m);
    const SMatrix& ginv = g.inverse();
    par::for_each_index(m * m, [&](std::size_t ab) {
        std::size_t a = ab / m, b = ab % m;
        for (std::size_t e = 0; e < m; ++e) {
            ScalarExpr acc;
            for (std::size_t c = 0; c < m; ++c) {
                const ScalarExpr& kv = k[(a * m + b) * m + c];
                if (kv.is_zero() || ginv[c][e].is_zero()) continue;
                acc += kv * ginv[c][e];
            }
            gamma[(a * m + b) * m + e] = acc;
        }
    });
    return Connection(patch, std::move(gamma));
}

Tensor curvature(const Connection& conn, const Tensor& x, const Tensor& y, const Tensor& z) {
    Tensor nyz = conn.nabla(y, z);
    Tensor nxz = conn.nabla(x, z);
    return conn.nabla(x, nyz) - conn.nabla(y, nxz) - conn.nabla(bracket(x, y), z);
}

CurvatureTable::CurvatureTable(const Connection& conn) : patch_(conn.patch()) {
    const std::size_t m = patch_->dim();
    comp_.assign(m * m * m * m, ScalarExpr());
    // R(E_a,E_b)E_c = E_a(G(b,c,d)) - E_b(G(a,c,d))
    //                 + G(b,c,e)G(a,e,d) - G(a,c,e)G(b,e,d) - C(a,b,e)G(e,c,d)
    par::for_each_index(m * m * m, [&](std::size_t abc) {
        std::size_t a = abc / (m * m), b = (abc / m) % m, c = abc % m;
        if (a == b) return;  // antisymmetric slot stays zero
        for (std::size_t d = 0; d < m; ++d) {
            ScalarExpr acc = patch_->frame_direct(a, conn.gamma(b, c, d)) -
                             patch_->frame_direct(b, conn.gamma(a, c, d));
            for (std::size_t e = 0; e < m; ++e) {
                const ScalarExpr& gbc = conn.gamma(b, c, e);
                if (!gbc.is_zero()) {
                    const ScalarExpr& gad = conn.gamma(a, e, d);
                    if (!gad.is_zero()) acc += gbc * gad;
                }
                const ScalarExpr& gac = conn.gamma(a, c, e);
                if (!gac.is_zero()) {
                    const ScalarExpr& gbd = conn.gamma(b, e, d);
                    if (!gbd.is_zero()) acc -= gac * gbd;
                }
                const ScalarExpr& cab = patch_->bracket_coeff(a, b)[e];
                if (!cab.is_zero()) {
                    const ScalarExpr& gcd_ = conn.gamma(e, c, d);
                    if (!gcd_.is_zero()) acc -= cab * gcd_;
                }
            }
            comp_[((a * m + b) * m + c) * m + d] = acc;
        }
    });
}

Tensor CurvatureTable::vector(std::size_t a, std::size_t b, std::size_t c) const {
    Tensor r = Tensor::vector_field(patch_);
    for (std::size_t d = 0; d < patch_->dim(); ++d) r.set(d) = at(a, b, c, d);
    return r;
}

ScalarExpr sectional(const Metric& g, const Connection& conn, const Tensor& x, const Tensor& y) {
    ScalarExpr xx = g.pair(x, x), yy = g.pair(y, y), xy = g.pair(x, y);
    ScalarExpr denom = xx * yy - xy * xy;
    if (denom.is_zero()) throw Error(ErrorCode::DegeneratePlane, "sectional curvature of a degenerate plane");
    Tensor r = curvature(conn, x, y, y);
    return g.pair(r, x) / denom;
}

ScalarExpr sectional(const Metric& g, const CurvatureTable& table, std::size_t a, std::size_t b) {
    const auto& patch = table.patch();
    const Tensor& gt = g.tensor();
    ScalarExpr denom = gt(a, a) * gt(b, b) - gt(a, b) * gt(a, b);
    if (denom.is_zero()) throw Error(ErrorCode::DegeneratePlane, "sectional curvature of a degenerate plane");
    ScalarExpr num;
    for (std::size_t d = 0; d < patch->dim(); ++d) {
        const ScalarExpr& rv = table.at(a, b, b, d);
        if (rv.is_zero() || gt(d, a).is_zero()) continue;
        num += rv * gt(d, a);
    }
    return num / denom;
}

Tensor ricci(const Metric& g, const CurvatureTable& table) {
    const auto& patch = table.patch();
    const std::size_t m = patch->dim();
    const Tensor& gt = g.tensor();
    const SMatrix& ginv = g.inverse();
    Tensor r = Tensor::bilinear(patch);
    par::for_each_index(m * m, [&](std::size_t bc) {
        std::size_t b = bc / m, c = bc % m;
        ScalarExpr acc;
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t d = 0; d < m; ++d) {
                if (ginv[a][d].is_zero()) continue;
                ScalarExpr inner;
                for (std::size_t e = 0; e < m; ++e) {
                    const ScalarExpr& rv = table.at(a, b, c, e);
                    if (rv.is_zero() || gt(e, d).is_zero()) continue;
                    inner += rv * gt(e, d);
                }
                if (!inner.is_zero()) acc += ginv[a][d] * inner;
            }
        r.set(b, c) = acc;
    });
    return r;
}

ScalarExpr nabla_norm_sq(const Metric& g, const Connection& conn, const Tensor& xi) {
    const std::size_t m = conn.dim();
    const SMatrix& ginv = g.inverse();
    std::vector<Tensor> nx(m);
    for (std::size_t a = 0; a < m; ++a) nx[a] = conn.nabla_frame(a, xi);
    ScalarExpr acc;
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            if (ginv[a][b].is_zero()) continue;
            acc += ginv[a][b] * g.pair(nx[a], nx[b]);
        }
    return acc;
}

}  // namespace qs3
