#ifndef QS3_TRIPLE_HPP
#define QS3_TRIPLE_HPP

#include "qs3/contact.hpp"

#include <array>
#include <optional>

namespace qs3 {

// Even permutations of {0,1,2} in the fixed order used for all per-
// permutation checks and report entries.
inline constexpr std::array<std::array<int, 3>, 3> kEvenPerms = {{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}};

struct ThreeStructure {
    PatchPtr patch;
    std::array<AlmostContactStructure, 3> s;
    Metric g;
};

// Locations of the Reeb fields inside the distinguished frame (each xi must
// be a constant multiple of a frame field) and the remaining frame fields.
struct VerticalSplit {
    std::array<std::size_t, 3> xi_index;
    std::vector<std::size_t> horizontal;
};
std::optional<VerticalSplit> find_vertical_split(const ThreeStructure& t, std::string* reason);

// Quaternionic-relation residuals per even permutation (alpha,beta,gamma),
// both sign forms, plus Reeb orthonormality and the interior-product
// identity eta_alpha = 1/2 i_{xi_beta} Phi_gamma. The metric-dependent
// residuals are filled only when a metric is supplied.
struct TripleRelations {
    std::array<Tensor, 3> phi_rel;       // phi_g - phi_a phi_b + eta_b (x) xi_a
    std::array<Tensor, 3> phi_rel_neg;   // phi_g + phi_b phi_a - eta_a (x) xi_b
    std::array<Tensor, 3> xi_rel;        // xi_g - phi_a xi_b
    std::array<Tensor, 3> xi_rel_neg;    // xi_g + phi_b xi_a
    std::array<Tensor, 3> eta_rel;       // eta_g - eta_a o phi_b
    std::array<Tensor, 3> eta_rel_neg;   // eta_g + eta_b o phi_a
    bool has_metric = false;
    std::array<std::array<ScalarExpr, 3>, 3> orthonormal;  // g(xi_a,xi_b) - delta
    std::array<PForm, 3> interior_identity;                // eta_a - 1/2 i_{xi_b} Phi_g
};
TripleRelations check_triple(const PatchPtr& patch,
                             const std::array<AlmostContactStructure, 3>& s, const Metric* g);
inline TripleRelations check_triple(const ThreeStructure& t) {
    return check_triple(t.patch, t.s, &t.g);
}

enum class VerticalKind { Constant, NonConstantF, NotInvolutive };

struct VerticalClassification {
    VerticalKind kind = VerticalKind::NotInvolutive;
    std::optional<Rational> c;          // set for Constant
    ScalarExpr f;                       // eta_gamma([xi_alpha, xi_beta]), first permutation
    std::array<Tensor, 3> bracket;      // [xi_a, xi_b] per even permutation
    std::array<Tensor, 3> horizontal_part;
    std::array<Tensor, 3> residual;     // bracket - f_perm xi_gamma
    std::array<ScalarExpr, 3> f_perm;
    bool pure_reeb_form = false;        // every bracket equals f_perm * xi_gamma
    bool f_agree = false;               // f equal across permutations
    bool f_constant = false;            // all coordinate derivatives vanish
};
VerticalClassification vertical_classification(const ThreeStructure& t, const VerticalSplit& split);

// Foliation geometry residuals (totally geodesic, Killing fields, the
// A-operator bracket formula, A-invariance of the splitting, horizontal
// d eta degeneracies and bracket stability).
struct FoliationGeometry {
    std::array<std::array<Tensor, 3>, 3> nabla_xi_horizontal;  // H-part of nabla_{xi_b} xi_g
    std::array<Tensor, 3> killing;                             // L_{xi_a} g
    std::array<Tensor, 3> bracket_formula;  // nabla_{xi_b} xi_g + g(A_a xi_b, xi_b) xi_a
    std::array<ScalarExpr, 3> bracket_scalar;                  // g(A_a xi_b, xi_b)
    std::array<bool, 3> a_preserves_vertical;
    std::array<bool, 3> a_preserves_horizontal;
    std::vector<ScalarExpr> deta_mixed;     // d eta_a(X, xi_b) over horizontal X
    std::vector<Tensor> mixed_brackets_h;   // H-residual... vertical part of [X, xi_b]
};
FoliationGeometry foliation_geometry(const ThreeStructure& t, const VerticalSplit& split,
                                     const Connection& conn,
                                     const std::array<KanemakiOperator, 3>& A,
                                     const std::array<PForm, 3>& deta);

// Joint rank data: per-structure ranks, the horizontal kernel of i_X d eta
// and its orthocomplement, with alpha-independence and phi-stability flags.
struct JointRankData {
    std::array<RankResult, 3> ranks;
    bool ranks_equal = false;
    std::vector<Tensor> kernel;       // E^{4m} basis (vector fields)
    std::vector<Tensor> kernel_perp;  // E^{4l} basis inside the horizontal space
    int l = 0, m = 0;
    int expected_rank = 0;            // 4l+3 (c != 0) or 4l+1 (c = 0)
    bool kernel_alpha_independent = false;  // same kernel for every alpha
    std::array<bool, 3> phi_stable{};       // phi_a kernel = kernel
};
// Throws RankMismatch when the three ranks disagree or fail the 4l+3 / 4l+1
// pattern; NonConstantKernelDimension when Gaussian elimination cannot
// certify a pivot on the whole chart.
JointRankData joint_rank(const ThreeStructure& t, const VerticalSplit& split,
                         const std::array<PForm, 3>& deta, bool c_nonzero);

// Horizontal-pair identities for d eta across the three structures.
struct HorizontalDetaChecks {
    std::vector<ScalarExpr> rotate;     // d eta_a(phi_b X, Y) - d eta_g(X, Y)
    std::vector<ScalarExpr> exchange;   // d eta_a(X, phi_a Y) - d eta_b(X, phi_b Y)
    std::vector<ScalarExpr> reversal;   // d eta_a(phi_b X, phi_b Y) + d eta_a(X, Y)
};
HorizontalDetaChecks horizontal_deta_checks(const ThreeStructure& t, const VerticalSplit& split,
                                            const std::array<PForm, 3>& deta);

// The splitting operators psi/theta, the auxiliary metric gbar and its
// well-definedness/symmetry residuals.
struct SplitOperators {
    std::array<Tensor, 3> psi, theta;
    std::array<Tensor, 3> phi_decomposition;  // phi - psi - theta
    Tensor gbar;                              // built from alpha = 0
    std::array<Tensor, 2> gbar_alpha_dependence;  // gbar(0) - gbar(1), gbar(0) - gbar(2)
    Tensor gbar_symmetry;
    std::string definiteness_note;            // verdict for gbar on E^{4l}
    bool definite_on_core = false;
};
SplitOperators split_operators(const ThreeStructure& t, const VerticalSplit& split,
                               const JointRankData& jr, const std::array<PForm, 3>& deta,
                               bool c_nonzero);

// Second fundamental forms of the two distributions in the adapted frame
// (horizontal first, then the Reeb fields); requires the frame orthonormal.
struct SecondFundamental {
    std::size_t q = 0;  // horizontal dimension
    // h_hor[a][i][j] = -g(nabla_{h_i} xi_a, h_j)
    std::vector<ScalarExpr> h_hor;
    // h_ver[i][a][b] = -g(nabla_{xi_a} h_i, xi_b)
    std::vector<ScalarExpr> h_ver;
    Tensor mean_curv_h;  // H_H (vector field)
    Tensor mean_curv_v;  // H_V
    ScalarExpr grassmann_norm_sq;  // sum_a |nabla_{e_a} xi|^2 from the h-tables
};
SecondFundamental second_fundamental(const ThreeStructure& t, const VerticalSplit& split,
                                     const Connection& conn);

}  // namespace qs3

#endif
