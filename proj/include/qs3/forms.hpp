#ifndef QS3_FORMS_HPP
#define QS3_FORMS_HPP

#include "qs3/patch.hpp"

#include <optional>

namespace qs3 {

// Alternating p-form stored on strictly increasing frame index tuples.
//
// Conventions (locked here for the whole project):
//   2 u^v = u(x)v - v(x)u for 1-forms, i.e. wedge = Alt(omega (x) tau);
//   (p+1) d omega = palais alternating sum;
//   i_X omega = p * omega(X, ...).
// These three scalings are mutually consistent: d o d = 0, the Leibniz rule
// and the Cartan formula all hold exactly, which the property tests pin down.
class PForm {
 public:
    PForm() = default;
    PForm(PatchPtr patch, int degree);

    static PForm from_scalar(PatchPtr patch, ScalarExpr f);
    static PForm from_one_form(const Tensor& omega);

    const PatchPtr& patch() const { return patch_; }
    int degree() const { return degree_; }
    std::size_t dim() const { return patch_->dim(); }

    std::size_t component_count() const { return comp_.size(); }
    const ScalarExpr& component(std::size_t rank) const { return comp_[rank]; }
    ScalarExpr& component(std::size_t rank) { return comp_[rank]; }

    // Component at a strictly increasing tuple.
    const ScalarExpr& at_sorted(std::span<const std::size_t> tuple) const;
    ScalarExpr& at_sorted(std::span<const std::size_t> tuple);

    // Value on an arbitrary frame tuple (signed, zero on repeats).
    ScalarExpr eval_frame(std::span<const std::size_t> tuple) const;

    // Multilinear evaluation on vector fields.
    ScalarExpr eval_fields(std::span<const Tensor* const> vectors) const;

    PForm operator+(const PForm& o) const;
    PForm operator-(const PForm& o) const;
    PForm operator-() const;
    PForm scaled(const ScalarExpr& f) const;

    bool is_zero_form() const;
    std::optional<std::vector<std::size_t>> first_nonzero_tuple() const;

    // The (0,p) tensor with the same values (dense, alternating).
    Tensor to_tensor() const;

    // Enumeration helpers for increasing tuples.
    static std::vector<std::size_t> unrank_tuple(std::size_t m, int p, std::size_t rank);
    static std::size_t rank_tuple(std::size_t m, std::span<const std::size_t> tuple);
    static std::size_t tuple_count(std::size_t m, int p);

 private:
    PatchPtr patch_;
    int degree_ = 0;
    std::vector<ScalarExpr> comp_;
};

// Wedge product under the 1/2-convention; degrees beyond the patch dimension
// give the zero form (rank probing iterates powers until zero).
PForm wedge(const PForm& a, const PForm& b);

// Exterior derivative (Palais formula with the 1/(p+1) weight).
PForm ext_d(const PForm& omega);

// Interior product (i_X omega)(Y...) = p * omega(X, Y...).
PForm interior(const Tensor& x, const PForm& omega);

// Lie derivatives. Forms use the Cartan formula; the direct bracket formula
// is exposed separately so tests can compare the two routes.
PForm lie_form(const Tensor& x, const PForm& omega);
PForm lie_form_bracket(const Tensor& x, const PForm& omega);
Tensor lie_vector(const Tensor& x, const Tensor& y);
Tensor lie_endo(const Tensor& x, const Tensor& t);
Tensor lie_bilinear(const Tensor& x, const Tensor& g);

}  // namespace qs3

#endif
