#ifndef QS3_BUILTINS_HPP
#define QS3_BUILTINS_HPP

#include "qs3/dsl.hpp"

namespace qs3 {

// Builtin manifolds:
//   g7           7-dim Lie frame, almost 3-contact but not hyper-normal,
//                Reeb distribution not involutive
//   g7p          7-dim Lie frame, brackets [xi_a, X_i] = xi_a; integrable
//                Reeb distribution, still not hyper-normal
//   trig n= c=   open subset of R^(4n+3) with the rotation-frame structure,
//                3-quasi-Sasakian of rank 3, [xi_a, xi_b] = c xi_g
//   flat n=      R^(4n+3) with the constant product structure, 3-cosymplectic
//   s3sas        3-dim Lie frame with [xi_a, xi_b] = 2 xi_g, 3-Sasakian
ManifoldSpec builtin_spec(const std::string& name, std::map<std::string, Rational> params);

std::vector<std::string> builtin_names();

}  // namespace qs3

#endif
