#include "qs3/contact.hpp"

#include "qs3/par.hpp"

namespace qs3 {

PForm fundamental_form(const AlmostContactStructure& s, const Metric& g) {
    const auto& patch = s.phi.patch();
    const std::size_t m = patch->dim();
    PForm r(patch, 2);
    for (std::size_t rank = 0; rank < r.component_count(); ++rank) {
        auto t = PForm::unrank_tuple(m, 2, rank);
        // g(E_a, phi E_b)
        ScalarExpr acc;
        for (std::size_t c = 0; c < m; ++c) {
            const ScalarExpr& pc = s.phi(c, t[1]);
            if (pc.is_zero() || g.tensor()(t[0], c).is_zero()) continue;
            acc += g.tensor()(t[0], c) * pc;
        }
        r.component(rank) = acc;
    }
    return r;
}

StructureAxioms check_structure(const AlmostContactStructure& s, const Metric* g) {
    const auto& patch = s.phi.patch();
    const std::size_t m = patch->dim();
    StructureAxioms out{Tensor::endo(patch), ScalarExpr(), Tensor::vector_field(patch),
                        Tensor::one_form(patch), std::nullopt};

    Tensor phi2 = endo_compose(s.phi, s.phi);
    Tensor id = Tensor::endo(patch);
    for (std::size_t i = 0; i < m; ++i) id.set(i, i) = ScalarExpr::from_int(1);
    out.phi_square = phi2 + id - outer_vector_form(s.xi, s.eta);

    out.eta_of_xi = s.eta.apply(s.xi).as_scalar() - ScalarExpr::from_int(1);
    out.phi_of_xi = s.phi.apply(s.xi);

    for (std::size_t b = 0; b < m; ++b) {
        ScalarExpr acc;
        for (std::size_t c = 0; c < m; ++c) {
            if (s.phi(c, b).is_zero() || s.eta(c).is_zero()) continue;
            acc += s.eta(c) * s.phi(c, b);
        }
        out.eta_after_phi.set(b) = acc;
    }

    if (g) {
        Tensor compat = Tensor::bilinear(patch);
        const Tensor& gt = g->tensor();
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b) {
                // g(phi E_a, phi E_b) - g(E_a, E_b) + eta(E_a) eta(E_b)
                ScalarExpr acc = -gt(a, b) + s.eta(a) * s.eta(b);
                for (std::size_t c = 0; c < m; ++c) {
                    if (s.phi(c, a).is_zero()) continue;
                    for (std::size_t d = 0; d < m; ++d) {
                        if (s.phi(d, b).is_zero() || gt(c, d).is_zero()) continue;
                        acc += s.phi(c, a) * gt(c, d) * s.phi(d, b);
                    }
                }
                compat.set(a, b) = acc;
            }
        out.compat = std::move(compat);
    }
    return out;
}

Tensor nijenhuis(const Tensor& t) {
    if (t.up() != 1 || t.down() != 1)
        throw Error(ErrorCode::ValenceMismatch, "nijenhuis needs a (1,1) tensor");
    const auto& patch = t.patch();
    const std::size_t m = patch->dim();
    Tensor out(patch, 1, 2);
    std::vector<Tensor> t_frame(m);  // T E_a
    for (std::size_t a = 0; a < m; ++a) t_frame[a] = t.apply(Tensor::frame_field(patch, a));
    par::for_each_index(m * m, [&](std::size_t ab) {
        std::size_t a = ab / m, b = ab % m;
        if (a == b) return;
        Tensor ea = Tensor::frame_field(patch, a);
        Tensor eb = Tensor::frame_field(patch, b);
        Tensor v = t.apply(t.apply(bracket(ea, eb)));
        v = v + bracket(t_frame[a], t_frame[b]);
        v = v - t.apply(bracket(t_frame[a], eb));
        v = v - t.apply(bracket(ea, t_frame[b]));
        for (std::size_t c = 0; c < m; ++c) out.set(c, a, b) = v(c);
    });
    return out;
}

NormalityTensors normality_tensors(const AlmostContactStructure& s) {
    const auto& patch = s.phi.patch();
    const std::size_t m = patch->dim();
    PForm eta_form = PForm::from_one_form(s.eta);
    PForm deta = ext_d(eta_form);

    NormalityTensors out{nijenhuis(s.phi), Tensor::bilinear(patch), lie_endo(s.xi, s.phi),
                         Tensor::one_form(patch)};

    // N1 = [phi,phi] + 2 d eta (x) xi
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            ScalarExpr de = ScalarExpr::from_int(2) * deta.eval_frame(std::vector<std::size_t>{a, b});
            if (de.is_zero()) continue;
            for (std::size_t c = 0; c < m; ++c) {
                if (s.xi(c).is_zero()) continue;
                out.n1.set(c, a, b) += de * s.xi(c);
            }
        }

    // N2(X,Y) = (L_{phi X} eta)(Y) - (L_{phi Y} eta)(X)
    std::vector<Tensor> phi_frame(m);
    for (std::size_t a = 0; a < m; ++a) phi_frame[a] = s.phi.apply(Tensor::frame_field(patch, a));
    std::vector<PForm> lie_eta(m);
    for (std::size_t a = 0; a < m; ++a) lie_eta[a] = lie_form_bracket(phi_frame[a], eta_form);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            out.n2.set(a, b) = lie_eta[a].eval_frame(std::vector<std::size_t>{b}) -
                               lie_eta[b].eval_frame(std::vector<std::size_t>{a});

    // N4 = L_xi eta
    PForm n4 = lie_form_bracket(s.xi, eta_form);
    for (std::size_t a = 0; a < m; ++a) out.n4.set(a) = n4.component(a);
    return out;
}

Tensor deta_phi_symmetry(const AlmostContactStructure& s, const PForm& deta) {
    const auto& patch = s.phi.patch();
    const std::size_t m = patch->dim();
    Tensor out = Tensor::bilinear(patch);
    Tensor dt = deta.to_tensor();
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            ScalarExpr acc;
            for (std::size_t c = 0; c < m; ++c) {
                if (!s.phi(c, a).is_zero() && !dt(c, b).is_zero()) acc += s.phi(c, a) * dt(c, b);
                if (!s.phi(c, b).is_zero() && !dt(c, a).is_zero()) acc -= s.phi(c, b) * dt(c, a);
            }
            out.set(a, b) = acc;
        }
    return out;
}

KanemakiOperator kanemaki_extract(const AlmostContactStructure& s, const Connection& conn,
                                  ScalarExpr gauge) {
    const auto& patch = s.phi.patch();
    const std::size_t m = patch->dim();
    // grad xi as an endomorphism: X -> nabla_X xi.
    Tensor grad_xi = Tensor::endo(patch);
    for (std::size_t a = 0; a < m; ++a) {
        Tensor v = conn.nabla_frame(a, s.xi);
        for (std::size_t c = 0; c < m; ++c) grad_xi.set(c, a) = v(c);
    }
    // phi A = grad xi forces A = -phi o grad xi away from the xi-line; the
    // xi-line component is the free gauge.
    Tensor a_op = -endo_compose(s.phi, grad_xi) + outer_vector_form(s.xi, s.eta).scaled(gauge);
    return KanemakiOperator{std::move(a_op), std::move(gauge)};
}

KanemakiResiduals kanemaki_residuals(const AlmostContactStructure& s, const Metric& g,
                                     const Connection& conn, const KanemakiOperator& A) {
    const auto& patch = s.phi.patch();
    const std::size_t m = patch->dim();
    KanemakiResiduals out{Tensor(patch, 1, 2), Tensor::bilinear(patch), Tensor::endo(patch),
                          Tensor::endo(patch)};

    std::vector<Tensor> a_frame(m);
    for (std::size_t a = 0; a < m; ++a) a_frame[a] = A.a.apply(Tensor::frame_field(patch, a));

    par::for_each_index(m, [&](std::size_t x) {
        Tensor ex = Tensor::frame_field(patch, x);
        Tensor nabla_phi = conn.nabla(ex, s.phi);  // (1,1)
        for (std::size_t y = 0; y < m; ++y) {
            // (nabla_X phi)Y - eta(Y) A X + g(A X, Y) xi
            Tensor v = Tensor::vector_field(patch);
            for (std::size_t c = 0; c < m; ++c) v.set(c) = nabla_phi(c, y);
            v = v - a_frame[x].scaled(s.eta(y));
            ScalarExpr gaxy = g.pair(a_frame[x], Tensor::frame_field(patch, y));
            v = v + s.xi.scaled(gaxy);
            for (std::size_t c = 0; c < m; ++c) out.eq_nabla_phi.set(c, x, y) = v(c);
        }
    });

    for (std::size_t x = 0; x < m; ++x)
        for (std::size_t y = 0; y < m; ++y) {
            Tensor ey = Tensor::frame_field(patch, y);
            out.symmetry.set(x, y) =
                g.pair(a_frame[x], ey) - g.pair(Tensor::frame_field(patch, x), a_frame[y]);
        }

    Tensor phi_a = endo_compose(s.phi, A.a);
    out.commute = phi_a - endo_compose(A.a, s.phi);

    Tensor grad_xi = Tensor::endo(patch);
    for (std::size_t a = 0; a < m; ++a) {
        Tensor v = conn.nabla_frame(a, s.xi);
        for (std::size_t c = 0; c < m; ++c) grad_xi.set(c, a) = v(c);
    }
    out.grad_xi = phi_a - grad_xi;
    return out;
}

KanemakiOperator kanemaki_extract_checked(const AlmostContactStructure& s, const Metric& g,
                                          const Connection& conn, ScalarExpr gauge) {
    KanemakiOperator A = kanemaki_extract(s, conn, std::move(gauge));
    KanemakiResiduals res = kanemaki_residuals(s, g, conn, A);
    if (!res.eq_nabla_phi.is_zero_tensor() || !res.symmetry.is_zero_tensor() ||
        !res.commute.is_zero_tensor() || !res.grad_xi.is_zero_tensor())
        throw Error(ErrorCode::KanemakiInconsistent,
                    "no symmetric phi-commuting A reproduces nabla phi; structure is not quasi-Sasakian");
    return A;
}

RankResult rank_of(const AlmostContactStructure& s) {
    const auto& patch = s.phi.patch();
    const std::size_t m = patch->dim();
    PForm eta_form = PForm::from_one_form(s.eta);
    PForm deta = ext_d(eta_form);

    // Largest p with (d eta)^p != 0; powers beyond the dimension vanish.
    std::vector<PForm> powers;  // powers[k] = (d eta)^(k+1)
    PForm power = deta;
    while (2 * (powers.size() + 1) <= m && !power.is_zero_form()) {
        powers.push_back(power);
        power = wedge(power, deta);
    }
    int p = static_cast<int>(powers.size());

    RankResult out;
    out.p = p;
    const PForm* certificate = nullptr;
    PForm eta_top = (p == 0) ? eta_form : wedge(eta_form, powers.back());
    if (!eta_top.is_zero_form()) {
        out.rank = 2 * p + 1;
        out.odd = true;
        certificate = &eta_top;
    } else if (p >= 1) {
        out.rank = 2 * p;
        out.odd = false;
        certificate = &powers.back();
    } else {
        // eta itself identically zero: no rank pattern applies.
        throw Error(ErrorCode::RankUndetermined, "eta vanishes identically");
    }

    for (std::size_t i = 0; i < certificate->component_count(); ++i)
        out.certificate.push_back(certificate->component(i));

    // A certificate form whose components share a non-constant polynomial
    // factor could vanish on a subvariety of the chart; report, don't guess.
    Poly common;
    for (std::size_t i = 0; i < certificate->component_count(); ++i) {
        const ScalarExpr& c = certificate->component(i);
        if (c.is_zero()) continue;
        common = common.is_zero() ? c.num() : poly_gcd(common, c.num());
        if (common.is_constant()) break;
    }
    if (!common.is_zero() && !common.is_constant())
        out.locus_note = "nonzero certificate has common factor " + common.to_string(patch->coords());
    return out;
}

}  // namespace qs3
