#pragma once

#include "lieclass/field.hpp"

namespace lieclass {

// Total derivative along the independent variable v: the explicit partial
// plus chain-rule terms through the dependent-variable jets (order-3 jet
// symbols are minted on demand, order 4 throws OrderOverflow). Expressions
// involving classification coordinates or their derivative symbols are
// rejected; unknown-function atoms chain through their arguments.
Expression total_derivative(const Expression& e, GenId v);
Expression total_derivative(const Expression& e, const std::string& v);

// Second prolongation of a point operator with components on the base
// coordinates only. Jet components follow the symmetric recursion
//   phi^v  = D_v(phi) - sum_w D_v(xi^w) * u_w
//   phi^vw = D_w(phi^v) - sum_z D_w(xi^z) * u_zv
// applied uniformly to every pair (v, w).
VectorField prolong2(const VectorField& X);

// Prolongation of an operator on the classification bundle. The point part
// is prolonged as above and the classification component mu is carried
// along; mu_t and mu_ut are the coefficients expressing invariance of the
// constraints f_t = 0 and f_{u_t} = 0, built with literal partial
// derivatives on the extended space:
//   mu_t  = d_t(mu)  - f_x d_t(xi1)  - f_y d_t(xi2)  - f_u d_t(phi)
//           - f_ux d_t(phi^x)  - f_uy d_t(phi^y)
//   mu_ut = the same template with d_t replaced by d_{u_t}.
struct EquivalenceProlongation {
  VectorField full;  // prolonged operator, including the classification component
  Expression mu_t;
  Expression mu_ut;
};
EquivalenceProlongation prolong_equivalence(const VectorField& Y);

}  // namespace lieclass
