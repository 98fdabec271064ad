#ifndef QS3_PATCH_HPP
#define QS3_PATCH_HPP

#include "qs3/linalg.hpp"
#include "qs3/scalar.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qs3 {

class FramedPatch;
using PatchPtr = std::shared_ptr<const FramedPatch>;

// A single chart (or abstract Lie frame) with a distinguished global frame.
// Every tensor in the project stores components with respect to this frame.
// Immutable after construction; all caches are built eagerly.
class FramedPatch {
 public:
    enum class Mode { Coordinate, Abstract };

    // Coordinate mode: frame[a][i] is the component of frame field a along
    // coordinate i. Requires a square, canonically invertible matrix.
    static PatchPtr coordinate(std::vector<std::string> coords,
                               std::vector<std::string> frame_names, SMatrix frame,
                               std::vector<ScalarExpr> excluded_locus = {});

    // Abstract Lie frame: bracket[a][b][c] are the structure constants of
    // [E_a, E_b] (full antisymmetric table, constant entries).
    static PatchPtr abstract_frame(std::vector<std::string> frame_names,
                                   std::vector<std::vector<std::vector<ScalarExpr>>> bracket);

    Mode mode() const { return mode_; }
    std::size_t dim() const { return frame_names_.size(); }
    std::size_t coord_count() const { return coords_.size(); }
    const std::vector<std::string>& coords() const { return coords_; }
    const std::vector<std::string>& frame_names() const { return frame_names_; }
    const std::vector<ScalarExpr>& excluded_locus() const { return excluded_; }

    // Frame bracket coefficients: [E_a, E_b] = sum_c bracket_coeff(a,b)[c] E_c.
    const std::vector<ScalarExpr>& bracket_coeff(std::size_t a, std::size_t b) const {
        return bracket_[a][b];
    }

    // Directional derivative of a scalar along frame field a. Abstract mode
    // differentiates only constants.
    ScalarExpr frame_direct(std::size_t a, const ScalarExpr& f) const;

    // Coordinate-mode accessors (empty matrices in abstract mode).
    const SMatrix& frame_matrix() const { return frame_; }
    const SMatrix& frame_matrix_inverse() const { return frame_inv_; }

    // Jacobi residual [[a,b],c] + [[b,c],a] + [[c,a],b] expanded in the
    // frame; exact zero for honest Lie brackets.
    std::vector<ScalarExpr> jacobi_residual(std::size_t a, std::size_t b, std::size_t c) const;

 private:
    FramedPatch() = default;

    Mode mode_ = Mode::Abstract;
    std::vector<std::string> coords_;
    std::vector<std::string> frame_names_;
    SMatrix frame_, frame_inv_;
    std::vector<std::vector<std::vector<ScalarExpr>>> bracket_;
    std::vector<ScalarExpr> excluded_;
};

// Dense (r,s)-tensor over the patch frame; contravariant indices first.
class Tensor {
 public:
    Tensor() = default;
    Tensor(PatchPtr patch, int up, int down);

    static Tensor vector_field(PatchPtr p) { return Tensor(std::move(p), 1, 0); }
    static Tensor one_form(PatchPtr p) { return Tensor(std::move(p), 0, 1); }
    static Tensor endo(PatchPtr p) { return Tensor(std::move(p), 1, 1); }
    static Tensor bilinear(PatchPtr p) { return Tensor(std::move(p), 0, 2); }

    // a-th frame field as a vector field.
    static Tensor frame_field(PatchPtr p, std::size_t a);
    // Dual coframe one-form of the a-th frame field (delta components).
    static Tensor coframe_field(PatchPtr p, std::size_t a);
    // Coordinate field d/dx_i expanded in the frame (coordinate mode only).
    static Tensor coordinate_field(PatchPtr p, std::size_t i);
    // Coordinate differential dx_i as a one-form on the frame.
    static Tensor coordinate_coform(PatchPtr p, std::size_t i);

    const PatchPtr& patch() const { return patch_; }
    int up() const { return up_; }
    int down() const { return down_; }
    int order() const { return up_ + down_; }
    std::size_t dim() const { return patch_->dim(); }

    const ScalarExpr& at(std::span<const std::size_t> idx) const { return comp_[flatten(idx)]; }
    ScalarExpr& at(std::span<const std::size_t> idx) { return comp_[flatten(idx)]; }

    template <typename... I>
    const ScalarExpr& operator()(I... i) const {
        std::size_t idx[] = {static_cast<std::size_t>(i)...};
        return at(std::span<const std::size_t>(idx, sizeof...(I)));
    }
    template <typename... I>
    ScalarExpr& set(I... i) {
        std::size_t idx[] = {static_cast<std::size_t>(i)...};
        return at(std::span<const std::size_t>(idx, sizeof...(I)));
    }

    const std::vector<ScalarExpr>& components() const { return comp_; }
    std::vector<ScalarExpr>& components() { return comp_; }

    bool is_zero_tensor() const;
    // First index tuple with a nonzero component, in row-major order.
    std::optional<std::vector<std::size_t>> first_nonzero() const;

    Tensor operator+(const Tensor& o) const;
    Tensor operator-(const Tensor& o) const;
    Tensor operator-() const;
    Tensor scaled(const ScalarExpr& f) const;

    // Scalar value of a (0,0) tensor.
    const ScalarExpr& as_scalar() const;

    // Contracts every covariant slot with the given vector fields, keeping
    // contravariant slots. apply(phi, X) is a vector field, apply(eta, X)
    // a (0,0) tensor.
    Tensor apply(std::span<const Tensor* const> vectors) const;
    Tensor apply(const Tensor& x) const;
    Tensor apply(const Tensor& x, const Tensor& y) const;

    // Unravels index tuples for iteration helpers.
    std::vector<std::size_t> unflatten(std::size_t flat) const;

 private:
    std::size_t flatten(std::span<const std::size_t> idx) const;

    PatchPtr patch_;
    int up_ = 0, down_ = 0;
    std::vector<ScalarExpr> comp_;
};

// Endomorphism composition (a o b)(X) = a(b(X)).
Tensor endo_compose(const Tensor& a, const Tensor& b);
// Outer product eta (x) xi of a one-form and a vector field, as a (1,1) tensor.
Tensor outer_vector_form(const Tensor& xi, const Tensor& eta);
// Outer product of two one-forms, as a (0,2) tensor.
Tensor outer_form_form(const Tensor& a, const Tensor& b);

// Lie bracket of vector fields; in abstract mode both arguments must have
// constant components.
Tensor bracket(const Tensor& x, const Tensor& y);

// Directional derivative X(f).
ScalarExpr direct(const Tensor& x, const ScalarExpr& f);

// Riemannian metric on the patch frame: symmetric with nonzero determinant.
class Metric {
 public:
    explicit Metric(Tensor g);

    const Tensor& tensor() const { return g_; }
    const PatchPtr& patch() const { return g_.patch(); }
    const SMatrix& inverse() const { return inv_; }
    bool is_identity() const { return identity_; }

    ScalarExpr pair(const Tensor& x, const Tensor& y) const;
    // Index lowering: g(X, .) as a one-form.
    Tensor flat(const Tensor& x) const;

 private:
    Tensor g_;
    SMatrix inv_;
    bool identity_ = false;
};

std::string render_vector(const Tensor& v);
std::string render_scalar(const ScalarExpr& e, const FramedPatch& patch);

}  // namespace qs3

#endif
