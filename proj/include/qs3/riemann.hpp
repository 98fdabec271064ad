#ifndef QS3_RIEMANN_HPP
#define QS3_RIEMANN_HPP

#include "qs3/patch.hpp"

namespace qs3 {

// Levi-Civita connection coefficients over the distinguished frame:
// nabla_{E_a} E_b = Gamma(a,b,c) E_c.
class Connection {
 public:
    Connection(PatchPtr patch, std::vector<ScalarExpr> gamma);

    const PatchPtr& patch() const { return patch_; }
    std::size_t dim() const { return patch_->dim(); }

    const ScalarExpr& gamma(std::size_t a, std::size_t b, std::size_t c) const {
        const std::size_t m = patch_->dim();
        return gamma_[(a * m + b) * m + c];
    }

    // nabla_{E_a} Y for a vector field Y.
    Tensor nabla_frame(std::size_t a, const Tensor& y) const;

    // Covariant derivative of an arbitrary (r,s) tensor along X.
    Tensor nabla(const Tensor& x, const Tensor& t) const;

 private:
    PatchPtr patch_;
    std::vector<ScalarExpr> gamma_;
};

// Koszul formula, solved against the metric inverse.
Connection levi_civita(const Metric& g);

// R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_{[X,Y]} Z.
Tensor curvature(const Connection& conn, const Tensor& x, const Tensor& y, const Tensor& z);

// Full frame table R(E_a,E_b)E_c, filled in parallel.
class CurvatureTable {
 public:
    CurvatureTable(const Connection& conn);

    const PatchPtr& patch() const { return patch_; }
    // Component along E_d of R(E_a,E_b)E_c.
    const ScalarExpr& at(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
        const std::size_t m = patch_->dim();
        return comp_[((a * m + b) * m + c) * m + d];
    }
    Tensor vector(std::size_t a, std::size_t b, std::size_t c) const;

 private:
    PatchPtr patch_;
    std::vector<ScalarExpr> comp_;
};

// Sectional curvature of the plane spanned by X and Y; requires the plane
// nondegenerate.
ScalarExpr sectional(const Metric& g, const Connection& conn, const Tensor& x, const Tensor& y);
ScalarExpr sectional(const Metric& g, const CurvatureTable& table, std::size_t a, std::size_t b);

// Ricci tensor as the metric trace of the curvature table.
Tensor ricci(const Metric& g, const CurvatureTable& table);

// |nabla xi|^2 = sum over a g-orthonormal frame of g(nabla_a xi, nabla_a xi).
ScalarExpr nabla_norm_sq(const Metric& g, const Connection& conn, const Tensor& xi);

}  // namespace qs3

#endif
