#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lieclass/field.hpp"

namespace lieclass::catalog {

// Chart of the equivalence space for u_t = f(x,y,u,u_x,u_y)*(u_xx + u_yy):
// base coordinates x, y, t, dependent u, classification coordinate f, the
// parameters used by the built-in operator families and the profile function
// Phi of the classification rows.
const char* chart_text();
std::unique_ptr<Chart> make_chart();

// Basis B1..B6 of the six-dimensional equivalence algebra:
//   B1 = x d_x + y d_y + t d_t + u d_u + f d_f
//   B2 = y d_x
//   B3 = d_x
//   B4 = d_y
//   B5 = t d_t - f d_f     (or d_t - f d_f with printed_y5)
//   B6 = d_u
// The default fifth operator is the one consistent with the commutator and
// adjoint tables and with the equivalence residuals; the printed_y5 variant
// reproduces the other circulating form of the list.
std::vector<VectorField> equivalence_basis(Chart& ch, bool printed_y5 = false);

// The 32 one-dimensional subalgebra representatives of the optimal system,
// as coefficient vectors over B1..B6 (entry k-1 is item k).
std::vector<std::vector<mpq_class>> optimal_system_items();

// Coefficient-space actions of the discrete reflections. x -> -x flips the
// B2 and B3 coordinates, u -> -u flips B6; t -> -t and f -> -f act trivially
// on the basis. Sign vectors for the non-identity group elements.
std::vector<std::vector<int>> reflection_signs();

// One row of the printed classification table: the projected operator Z on
// (x, y, u, f), the claimed u-level invariant, the weight in the solved form
// f = weight * Phi(invariant), and the additional operator on (x, y, t, u).
struct Table3Row {
  int id;
  const char* z;
  const char* invariant;
  const char* weight;
  const char* x2;
};
const std::vector<Table3Row>& table3_rows();

}  // namespace lieclass::catalog
