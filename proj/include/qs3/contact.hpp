#ifndef QS3_CONTACT_HPP
#define QS3_CONTACT_HPP

#include "qs3/forms.hpp"
#include "qs3/riemann.hpp"

#include <optional>

namespace qs3 {

// One almost contact structure (phi, xi, eta) on a shared patch. The metric
// is owned by the caller since triples share one.
struct AlmostContactStructure {
    Tensor phi;  // (1,1)
    Tensor xi;   // (1,0)
    Tensor eta;  // (0,1)
};

// Fundamental 2-form Phi(X,Y) = g(X, phi Y).
PForm fundamental_form(const AlmostContactStructure& s, const Metric& g);

// Axiom residuals; all must vanish identically for a valid structure.
struct StructureAxioms {
    Tensor phi_square;            // phi^2 + I - eta (x) xi
    ScalarExpr eta_of_xi;         // eta(xi) - 1
    Tensor phi_of_xi;             // phi xi
    Tensor eta_after_phi;         // eta o phi
    std::optional<Tensor> compat; // g(phiX, phiY) - g(X,Y) + eta(X)eta(Y)
};
StructureAxioms check_structure(const AlmostContactStructure& s, const Metric* g);

// Nijenhuis torsion of a (1,1) tensor, as a (1,2) tensor over frame pairs:
// [T,T](X,Y) = T^2[X,Y] + [TX,TY] - T[TX,Y] - T[X,TY].
Tensor nijenhuis(const Tensor& t);

struct NormalityTensors {
    Tensor n1;  // (1,2): [phi,phi] + 2 d eta (x) xi
    Tensor n2;  // (0,2)
    Tensor n3;  // (1,1): L_xi phi
    Tensor n4;  // (0,1): L_xi eta
};
NormalityTensors normality_tensors(const AlmostContactStructure& s);

// d eta symmetry residual d eta(phi X, Y) - d eta(phi Y, X) over frame pairs.
Tensor deta_phi_symmetry(const AlmostContactStructure& s, const PForm& deta);

// Symmetric operator A with phi A = nabla xi and
// (nabla_X phi)Y = eta(Y) A X - g(A X, Y) xi. The component g(A xi, xi) is
// not pinned down by those equations; `gauge` supplies it (0 for standalone
// structures, g(A xi_beta, xi_beta) inside a triple).
struct KanemakiOperator {
    Tensor a;          // (1,1)
    ScalarExpr gauge;  // g(A xi, xi)
};
KanemakiOperator kanemaki_extract(const AlmostContactStructure& s, const Connection& conn,
                                  ScalarExpr gauge);

struct KanemakiResiduals {
    Tensor eq_nabla_phi;  // (1,2): (nabla_X phi)Y - eta(Y)AX + g(AX,Y)xi
    Tensor symmetry;      // (0,2): g(AX,Y) - g(X,AY)
    Tensor commute;       // (1,1): phi A - A phi
    Tensor grad_xi;       // (1,1): phi A - nabla xi
};
KanemakiResiduals kanemaki_residuals(const AlmostContactStructure& s, const Metric& g,
                                     const Connection& conn, const KanemakiOperator& A);

// Checked variant: throws KanemakiInconsistent when any residual is nonzero.
KanemakiOperator kanemaki_extract_checked(const AlmostContactStructure& s, const Metric& g,
                                          const Connection& conn, ScalarExpr gauge);

// Rank of eta from the vanishing pattern of eta^(d eta)^p and (d eta)^p.
struct RankResult {
    int p = 0;
    int rank = 0;             // 2p+1 or 2p
    bool odd = false;
    // Components of the nonzero certificate form (eta^(d eta)^p, resp.
    // (d eta)^p), for numeric cross-checking.
    std::vector<ScalarExpr> certificate;
    // Set when the certificate has a common non-constant polynomial factor,
    // i.e. it could vanish on a proper subvariety.
    std::string locus_note;
};
RankResult rank_of(const AlmostContactStructure& s);

}  // namespace qs3

#endif
