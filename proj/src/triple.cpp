#include "qs3/triple.hpp"

#include "qs3/par.hpp"

#include <algorithm>

namespace qs3 {

namespace {

Tensor identity_endo(const PatchPtr& patch) {
    Tensor id = Tensor::endo(patch);
    for (std::size_t i = 0; i < patch->dim(); ++i) id.set(i, i) = ScalarExpr::from_int(1);
    return id;
}

// eta_a o phi_b as a one-form.
Tensor form_after_endo(const Tensor& eta, const Tensor& phi) {
    const std::size_t m = eta.dim();
    Tensor r = Tensor::one_form(eta.patch());
    for (std::size_t b = 0; b < m; ++b) {
        ScalarExpr acc;
        for (std::size_t c = 0; c < m; ++c) {
            if (eta(c).is_zero() || phi(c, b).is_zero()) continue;
            acc += eta(c) * phi(c, b);
        }
        r.set(b) = acc;
    }
    return r;
}

// Projection onto selected frame index slots.
Tensor slot_projection(const PatchPtr& patch, const std::vector<std::size_t>& slots) {
    Tensor p = Tensor::endo(patch);
    for (std::size_t a : slots) p.set(a, a) = ScalarExpr::from_int(1);
    return p;
}

}  // namespace

std::optional<VerticalSplit> find_vertical_split(const ThreeStructure& t, std::string* reason) {
    const std::size_t m = t.patch->dim();
    VerticalSplit split{};
    std::array<bool, 3> found{};
    std::vector<bool> vertical_slot(m, false);
    for (int a = 0; a < 3; ++a) {
        int idx = -1;
        for (std::size_t i = 0; i < m; ++i) {
            if (t.s[a].xi(i).is_zero()) continue;
            if (idx >= 0) {
                if (reason)
                    *reason = "xi_" + std::to_string(a + 1) +
                              " is not a multiple of a single distinguished frame field";
                return std::nullopt;
            }
            idx = static_cast<int>(i);
        }
        if (idx < 0) {
            if (reason) *reason = "xi_" + std::to_string(a + 1) + " vanishes";
            return std::nullopt;
        }
        if (vertical_slot[idx]) {
            if (reason) *reason = "two Reeb fields share one frame direction";
            return std::nullopt;
        }
        vertical_slot[idx] = true;
        split.xi_index[a] = static_cast<std::size_t>(idx);
        found[a] = true;
    }
    for (std::size_t i = 0; i < m; ++i)
        if (!vertical_slot[i]) split.horizontal.push_back(i);
    // Certify the complement g-orthogonal to the Reeb fields.
    for (std::size_t h : split.horizontal)
        for (int a = 0; a < 3; ++a)
            if (!t.g.pair(Tensor::frame_field(t.patch, h), t.s[a].xi).is_zero()) {
                if (reason)
                    *reason = "frame field " + t.patch->frame_names()[h] +
                              " is not g-orthogonal to the Reeb fields";
                return std::nullopt;
            }
    return split;
}

TripleRelations check_triple(const PatchPtr& patch,
                             const std::array<AlmostContactStructure, 3>& s, const Metric* g) {
    TripleRelations out{};
    for (int k = 0; k < 3; ++k) {
        auto [a, b, c] = std::tuple{kEvenPerms[k][0], kEvenPerms[k][1], kEvenPerms[k][2]};
        out.phi_rel[k] =
            s[c].phi - endo_compose(s[a].phi, s[b].phi) + outer_vector_form(s[a].xi, s[b].eta);
        out.phi_rel_neg[k] =
            s[c].phi + endo_compose(s[b].phi, s[a].phi) - outer_vector_form(s[b].xi, s[a].eta);
        out.xi_rel[k] = s[c].xi - s[a].phi.apply(s[b].xi);
        out.xi_rel_neg[k] = s[c].xi + s[b].phi.apply(s[a].xi);
        out.eta_rel[k] = s[c].eta - form_after_endo(s[a].eta, s[b].phi);
        out.eta_rel_neg[k] = s[c].eta + form_after_endo(s[b].eta, s[a].phi);
        if (g) {
            PForm phi_c = fundamental_form(s[c], *g);
            PForm half_interior =
                interior(s[b].xi, phi_c).scaled(ScalarExpr::from_rational(Rational(1, 2)));
            out.interior_identity[k] = PForm::from_one_form(s[a].eta) - half_interior;
        }
    }
    if (g) {
        out.has_metric = true;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                ScalarExpr delta = (a == b) ? ScalarExpr::from_int(1) : ScalarExpr();
                out.orthonormal[a][b] = g->pair(s[a].xi, s[b].xi) - delta;
            }
    }
    (void)patch;
    return out;
}

VerticalClassification vertical_classification(const ThreeStructure& t,
                                               const VerticalSplit& split) {
    VerticalClassification out{};
    const auto& patch = t.patch;
    bool any_horizontal = false;
    for (int k = 0; k < 3; ++k) {
        auto [a, b, g] = std::tuple{kEvenPerms[k][0], kEvenPerms[k][1], kEvenPerms[k][2]};
        out.bracket[k] = bracket(t.s[a].xi, t.s[b].xi);
        Tensor hor = Tensor::vector_field(patch);
        for (std::size_t h : split.horizontal) hor.set(h) = out.bracket[k](h);
        any_horizontal = any_horizontal || !hor.is_zero_tensor();
        out.horizontal_part[k] = std::move(hor);
        out.f_perm[k] = t.s[g].eta.apply(out.bracket[k]).as_scalar();
        out.residual[k] = out.bracket[k] - t.s[g].xi.scaled(out.f_perm[k]);
    }
    out.f = out.f_perm[0];
    out.pure_reeb_form = std::all_of(out.residual.begin(), out.residual.end(),
                                     [](const Tensor& r) { return r.is_zero_tensor(); });
    out.f_agree = (out.f_perm[0] - out.f_perm[1]).is_zero() &&
                  (out.f_perm[0] - out.f_perm[2]).is_zero();
    out.f_constant = out.f.is_rational();
    if (!out.f_constant && patch->mode() == FramedPatch::Mode::Coordinate) {
        bool all_zero = true;
        for (std::size_t i = 0; i < patch->coord_count(); ++i)
            if (!out.f.diff(static_cast<std::uint32_t>(i)).is_zero()) all_zero = false;
        out.f_constant = all_zero && out.f.is_rational();
    }
    if (any_horizontal) {
        out.kind = VerticalKind::NotInvolutive;
    } else if (out.pure_reeb_form && out.f_agree && out.f_constant) {
        out.kind = VerticalKind::Constant;
        out.c = out.f.rational_value();
    } else {
        out.kind = VerticalKind::NonConstantF;
    }
    return out;
}

FoliationGeometry foliation_geometry(const ThreeStructure& t, const VerticalSplit& split,
                                     const Connection& conn,
                                     const std::array<KanemakiOperator, 3>& A,
                                     const std::array<PForm, 3>& deta) {
    const auto& patch = t.patch;
    FoliationGeometry out{};
    for (int b = 0; b < 3; ++b)
        for (int g = 0; g < 3; ++g) {
            Tensor n = conn.nabla(t.s[b].xi, t.s[g].xi);
            Tensor hor = Tensor::vector_field(patch);
            for (std::size_t h : split.horizontal) hor.set(h) = n(h);
            out.nabla_vv_horizontal[b][g] = std::move(hor);
        }
    for (int a = 0; a < 3; ++a) out.killing[a] = lie_bilinear(t.s[a].xi, t.g.tensor());
    for (int k = 0; k < 3; ++k) {
        auto [a, b, g] = std::tuple{kEvenPerms[k][0], kEvenPerms[k][1], kEvenPerms[k][2]};
        Tensor axb = A[a].a.apply(t.s[b].xi);
        out.eq6_scalar[k] = t.g.pair(axb, t.s[b].xi);
        out.eq6_residual[k] =
            conn.nabla(t.s[b].xi, t.s[g].xi) + t.s[a].xi.scaled(out.eq6_scalar[k]);
    }
    std::vector<std::size_t> vertical_slots(split.xi_index.begin(), split.xi_index.end());
    Tensor p_h = slot_projection(patch, split.horizontal);
    Tensor p_v = slot_projection(patch, vertical_slots);
    for (int a = 0; a < 3; ++a) {
        out.a_v_to_h[a] = endo_compose(p_h, endo_compose(A[a].a, p_v));
        out.a_h_to_v[a] = endo_compose(p_v, endo_compose(A[a].a, p_h));
        out.a_preserves_vertical[a] = out.a_v_to_h[a].is_zero_tensor();
        out.a_preserves_horizontal[a] = out.a_h_to_v[a].is_zero_tensor();
    }
    for (int a = 0; a < 3; ++a)
        for (std::size_t h : split.horizontal)
            for (int b = 0; b < 3; ++b)
                out.deta_mixed.push_back(
                    deta[a].eval_frame(std::vector<std::size_t>{h, split.xi_index[b]}));
    for (std::size_t h : split.horizontal)
        for (int b = 0; b < 3; ++b) {
            Tensor br = bracket(Tensor::frame_field(patch, h), t.s[b].xi);
            for (std::size_t v : vertical_slots) out.bracket_mixed_vertical.push_back(br(v));
        }
    return out;
}

JointRankData joint_rank(const ThreeStructure& t, const VerticalSplit& split,
                         const std::array<PForm, 3>& deta, bool c_nonzero) {
    const auto& patch = t.patch;
    const std::size_t m = patch->dim();
    JointRankData out{};
    for (int a = 0; a < 3; ++a) out.ranks[a] = rank_of(t.s[a]);
    out.ranks_equal =
        out.ranks[0].rank == out.ranks[1].rank && out.ranks[0].rank == out.ranks[2].rank;
    if (!out.ranks_equal)
        throw Error(ErrorCode::RankMismatch,
                    "structure ranks disagree: " + std::to_string(out.ranks[0].rank) + ", " +
                        std::to_string(out.ranks[1].rank) + ", " + std::to_string(out.ranks[2].rank));

    const std::size_t hn = split.horizontal.size();
    // Kernel of X in H -> i_X d eta_alpha, one matrix per alpha.
    std::array<std::vector<Tensor>, 3> kernels;
    for (int al = 0; al < 3; ++al) {
        SMatrix mat(m, std::vector<ScalarExpr>(hn));
        for (std::size_t b = 0; b < m; ++b)
            for (std::size_t i = 0; i < hn; ++i)
                mat[b][i] = deta[al].eval_frame(std::vector<std::size_t>{split.horizontal[i], b});
        auto basis = smat_nullspace_certified(mat);
        for (auto& coeffs : basis) {
            Tensor v = Tensor::vector_field(patch);
            for (std::size_t i = 0; i < hn; ++i) v.set(split.horizontal[i]) = coeffs[i];
            kernels[al].push_back(std::move(v));
        }
    }
    out.kernel = kernels[0];

    auto as_rows = [&](const std::vector<Tensor>& vs) {
        std::vector<std::vector<ScalarExpr>> rows;
        for (const auto& v : vs) {
            std::vector<ScalarExpr> r(hn);
            for (std::size_t i = 0; i < hn; ++i) r[i] = v(split.horizontal[i]);
            rows.push_back(std::move(r));
        }
        return rows;
    };
    out.kernel_alpha_independent = true;
    for (int al = 1; al < 3; ++al) {
        if (kernels[al].size() != kernels[0].size()) {
            out.kernel_alpha_independent = false;
            continue;
        }
        auto rows = as_rows(kernels[al]);
        for (const auto& v : as_rows(kernels[0]))
            if (!smat_in_row_span(rows, v)) out.kernel_alpha_independent = false;
    }

    for (int al = 0; al < 3; ++al) {
        out.phi_stable[al] = true;
        auto rows = as_rows(out.kernel);
        for (const auto& v : out.kernel) {
            Tensor pv = t.s[al].phi.apply(v);
            std::vector<ScalarExpr> coords(hn);
            bool horizontal = true;
            for (std::size_t i = 0; i < hn; ++i) coords[i] = pv(split.horizontal[i]);
            for (std::size_t slot : split.xi_index)
                if (!pv(slot).is_zero()) horizontal = false;
            if (!horizontal || !smat_in_row_span(rows, coords)) out.phi_stable[al] = false;
        }
    }

    if (out.kernel.size() % 4 != 0)
        throw Error(ErrorCode::RankMismatch,
                    "horizontal kernel dimension " + std::to_string(out.kernel.size()) +
                        " is not a multiple of 4");
    out.m = static_cast<int>(out.kernel.size() / 4);
    out.l = static_cast<int>(hn / 4) - out.m;
    out.expected_rank = c_nonzero ? 4 * out.l + 3 : 4 * out.l + 1;
    if (out.ranks[0].rank != out.expected_rank)
        throw Error(ErrorCode::RankMismatch,
                    "rank " + std::to_string(out.ranks[0].rank) + " does not match the " +
                        (c_nonzero ? "4l+3" : "4l+1") + " pattern with l = " + std::to_string(out.l));

    // Orthocomplement of the kernel inside the horizontal space.
    if (!out.kernel.empty()) {
        SMatrix mat(out.kernel.size(), std::vector<ScalarExpr>(hn));
        for (std::size_t j = 0; j < out.kernel.size(); ++j)
            for (std::size_t i = 0; i < hn; ++i)
                mat[j][i] = t.g.pair(Tensor::frame_field(patch, split.horizontal[i]), out.kernel[j]);
        auto basis = smat_nullspace_certified(mat);
        for (auto& coeffs : basis) {
            Tensor v = Tensor::vector_field(patch);
            for (std::size_t i = 0; i < hn; ++i) v.set(split.horizontal[i]) = coeffs[i];
            out.kernel_perp.push_back(std::move(v));
        }
    } else {
        for (std::size_t i = 0; i < hn; ++i)
            out.kernel_perp.push_back(Tensor::frame_field(patch, split.horizontal[i]));
    }
    return out;
}

HorizontalDetaChecks horizontal_deta_checks(const ThreeStructure& t, const VerticalSplit& split,
                                            const std::array<PForm, 3>& deta) {
    HorizontalDetaChecks out{};
    const auto& patch = t.patch;
    std::array<Tensor, 3> dt;
    for (int a = 0; a < 3; ++a) dt[a] = deta[a].to_tensor();
    for (std::size_t hx : split.horizontal) {
        Tensor x = Tensor::frame_field(patch, hx);
        std::array<Tensor, 3> phix;
        for (int a = 0; a < 3; ++a) phix[a] = t.s[a].phi.apply(x);
        for (std::size_t hy : split.horizontal) {
            Tensor y = Tensor::frame_field(patch, hy);
            std::array<Tensor, 3> phiy;
            for (int a = 0; a < 3; ++a) phiy[a] = t.s[a].phi.apply(y);
            for (int k = 0; k < 3; ++k) {
                auto [a, b, g] = std::tuple{kEvenPerms[k][0], kEvenPerms[k][1], kEvenPerms[k][2]};
                out.rotate.push_back(dt[a].apply(phix[b], y).as_scalar() -
                                     dt[g].apply(x, y).as_scalar());
            }
            for (int a = 0; a < 3; ++a)
                for (int b = a + 1; b < 3; ++b) {
                    out.exchange.push_back(dt[a].apply(x, phiy[a]).as_scalar() -
                                           dt[b].apply(x, phiy[b]).as_scalar());
                    out.reversal.push_back(dt[a].apply(phix[b], phiy[b]).as_scalar() +
                                           dt[a].apply(x, y).as_scalar());
                    out.reversal.push_back(dt[b].apply(phix[a], phiy[a]).as_scalar() +
                                           dt[b].apply(x, y).as_scalar());
                }
        }
    }
    return out;
}

SplitOperators split_operators(const ThreeStructure& t, const VerticalSplit& split,
                               const JointRankData& jr, const std::array<PForm, 3>& deta,
                               bool c_nonzero) {
    const auto& patch = t.patch;
    const std::size_t m = patch->dim();
    SplitOperators out{};

    // Basis matrix: columns are E^{4l} vectors, E^{4m} vectors, then the
    // Reeb fields; projections come from its inverse.
    std::vector<const Tensor*> columns;
    for (const auto& v : jr.kernel_perp) columns.push_back(&v);
    std::size_t core_count = jr.kernel_perp.size();
    for (const auto& v : jr.kernel) columns.push_back(&v);
    std::vector<Tensor> xis;
    for (int a = 0; a < 3; ++a) xis.push_back(t.s[a].xi);
    for (const auto& v : xis) columns.push_back(&v);
    if (columns.size() != m)
        throw Error(ErrorCode::DimensionMismatch, "splitting basis does not span the frame");
    SMatrix bm(m, std::vector<ScalarExpr>(m));
    for (std::size_t c = 0; c < m; ++c)
        for (std::size_t r = 0; r < m; ++r) bm[r][c] = (*columns[c])(r);
    SMatrix binv = smat_inverse(bm, ErrorCode::FrameSolveFailure, "splitting basis singular");

    auto block_projection = [&](std::size_t begin, std::size_t end) {
        Tensor p = Tensor::endo(patch);
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b) {
                ScalarExpr acc;
                for (std::size_t c = begin; c < end; ++c) {
                    if (bm[a][c].is_zero() || binv[c][b].is_zero()) continue;
                    acc += bm[a][c] * binv[c][b];
                }
                p.set(a, b) = acc;
            }
        return p;
    };
    Tensor p_core = block_projection(0, core_count);                       // E^{4l}
    Tensor p_kernel = block_projection(core_count, core_count + jr.kernel.size());  // E^{4m}
    Tensor p_vertical = block_projection(core_count + jr.kernel.size(), m);

    Tensor p_psi = c_nonzero ? p_core + p_vertical : p_core;
    Tensor p_theta = c_nonzero ? p_kernel : p_kernel + p_vertical;
    for (int a = 0; a < 3; ++a) {
        out.psi[a] = endo_compose(t.s[a].phi, p_psi);
        out.theta[a] = endo_compose(t.s[a].phi, p_theta);
        out.phi_decomposition[a] = t.s[a].phi - out.psi[a] - out.theta[a];
    }

    // gbar = -d eta_a(PX, phi_a PY) on the 4l-block, g elsewhere.
    std::array<Tensor, 3> gbar;
    std::array<Tensor, 3> dt;
    for (int a = 0; a < 3; ++a) dt[a] = deta[a].to_tensor();
    for (int al = 0; al < 3; ++al) {
        Tensor gb = Tensor::bilinear(patch);
        for (std::size_t a = 0; a < m; ++a) {
            Tensor pa = p_core.apply(Tensor::frame_field(patch, a));
            for (std::size_t b = 0; b < m; ++b) {
                Tensor pb = p_core.apply(Tensor::frame_field(patch, b));
                ScalarExpr v = -dt[al].apply(pa, t.s[al].phi.apply(pb)).as_scalar();
                v += t.g.tensor()(a, b) - t.g.pair(pa, pb);
                gb.set(a, b) = v;
            }
        }
        gbar[al] = std::move(gb);
    }
    out.gbar = gbar[0];
    out.gbar_alpha_dependence[0] = gbar[0] - gbar[1];
    out.gbar_alpha_dependence[1] = gbar[0] - gbar[2];
    Tensor sym = Tensor::bilinear(patch);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) sym.set(a, b) = out.gbar(a, b) - out.gbar(b, a);
    out.gbar_symmetry = std::move(sym);

    // Definiteness of the 4l-block, by leading principal minors.
    if (jr.kernel_perp.empty()) {
        out.definiteness_note = "4l-block is zero-dimensional; positive definite vacuously";
        out.definite_on_core = true;
    } else {
        const std::size_t n4l = jr.kernel_perp.size();
        SMatrix gm(n4l, std::vector<ScalarExpr>(n4l));
        for (std::size_t i = 0; i < n4l; ++i)
            for (std::size_t j = 0; j < n4l; ++j)
                gm[i][j] = -dt[0].apply(jr.kernel_perp[i], t.s[0].phi.apply(jr.kernel_perp[j]))
                                .as_scalar();
        bool all_positive = true, decided = true;
        for (std::size_t k = 1; k <= n4l; ++k) {
            SMatrix minor(k, std::vector<ScalarExpr>(k));
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j) minor[i][j] = gm[i][j];
            ScalarExpr d = smat_det(minor);
            if (d.is_rational()) {
                if (d.rational_value() <= 0) all_positive = false;
            } else {
                decided = false;
            }
        }
        if (!decided) {
            out.definiteness_note = "minor signs are not constant; undecided symbolically";
            out.definite_on_core = false;
        } else if (all_positive) {
            out.definiteness_note = "positive definite on the 4l-block (all principal minors positive)";
            out.definite_on_core = true;
        } else {
            out.definiteness_note = "not positive definite on the 4l-block";
            out.definite_on_core = false;
        }
    }
    return out;
}

SecondFundamental second_fundamental(const ThreeStructure& t, const VerticalSplit& split,
                                     const Connection& conn) {
    const auto& patch = t.patch;
    SecondFundamental out{};
    const std::size_t q = split.horizontal.size();
    out.q = q;
    out.h_hor.assign(3 * q * q, ScalarExpr());
    out.h_ver.assign(q * 3 * 3, ScalarExpr());

    std::vector<Tensor> h_fields;
    for (std::size_t h : split.horizontal) h_fields.push_back(Tensor::frame_field(patch, h));

    for (int a = 0; a < 3; ++a)
        for (std::size_t i = 0; i < q; ++i) {
            Tensor n = conn.nabla_frame(split.horizontal[i], t.s[a].xi);
            for (std::size_t j = 0; j < q; ++j)
                out.h_hor[(a * q + i) * q + j] = -t.g.pair(n, h_fields[j]);
        }
    for (std::size_t i = 0; i < q; ++i)
        for (int a = 0; a < 3; ++a) {
            Tensor n = conn.nabla_frame(split.xi_index[a], h_fields[i]);
            for (int b = 0; b < 3; ++b)
                out.h_ver[(i * 3 + a) * 3 + b] = -t.g.pair(n, t.s[b].xi);
        }

    out.mean_curv_h = Tensor::vector_field(patch);
    out.mean_curv_v = Tensor::vector_field(patch);
    if (q > 0) {
        for (int a = 0; a < 3; ++a) {
            ScalarExpr trace;
            for (std::size_t i = 0; i < q; ++i) trace += out.h_hor[(a * q + i) * q + i];
            Tensor contrib = t.s[a].xi.scaled(trace / ScalarExpr::from_int(static_cast<long long>(q)));
            out.mean_curv_h = out.mean_curv_h + contrib;
        }
        for (std::size_t i = 0; i < q; ++i) {
            ScalarExpr trace;
            for (int a = 0; a < 3; ++a) trace += out.h_ver[(i * 3 + a) * 3 + a];
            out.mean_curv_v =
                out.mean_curv_v + h_fields[i].scaled(trace / ScalarExpr::from_int(3));
        }
    }

    ScalarExpr norm;
    for (const ScalarExpr& h : out.h_hor) norm += h * h;
    for (const ScalarExpr& h : out.h_ver) norm += h * h;
    out.grassmann_norm_sq = norm;
    return out;
}

}  // namespace qs3
