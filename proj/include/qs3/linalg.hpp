#ifndef QS3_LINALG_HPP
#define QS3_LINALG_HPP

#include "qs3/errors.hpp"
#include "qs3/scalar.hpp"

#include <vector>

namespace qs3 {

using SMatrix = std::vector<std::vector<ScalarExpr>>;

SMatrix smat_identity(std::size_t n);

ScalarExpr smat_det(SMatrix m);

// Gauss-Jordan inverse over the scalar fraction field. Pivots prefer nonzero
// rational constants; any canonically nonzero entry is accepted otherwise.
SMatrix smat_inverse(const SMatrix& m, ErrorCode on_singular, const char* what);

// Kernel basis of m (as column vectors x with m*x = 0). Every pivot must be
// a nonzero rational constant so the kernel dimension cannot jump anywhere
// on the chart; a column whose only nonzero candidates are non-constant
// raises NonConstantKernelDimension.
std::vector<std::vector<ScalarExpr>> smat_nullspace_certified(SMatrix m);

// True when v lies in the row span of basis (as rational functions).
bool smat_in_row_span(std::vector<std::vector<ScalarExpr>> basis, std::vector<ScalarExpr> v);

}  // namespace qs3

#endif
