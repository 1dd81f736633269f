#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lieclass/field.hpp"
#include "lieclass/jets.hpp"

namespace lieclass {

// The toolkit studies the evolution class
//
//   u_t = f(x, y, u, u_x, u_y) * (u_xx + u_yy)
//
// on charts providing the coordinates x, y, t and the dependent u; equivalence
// work additionally needs the classification coordinate f.

// Residual of the infinitesimal symmetry condition: the second prolongation of
// X applied to u_t - f*(u_xx + u_yy), restricted to solutions (u_t replaced by
// the right-hand side). Zero iff X generates a one-parameter symmetry group.
Expression symmetry_residual(const VectorField& X, const Expression& f);

enum class Verdict { Yes, No, Conditional };

std::string to_string(Verdict v);

struct SymmetryCheck {
  Verdict verdict = Verdict::No;
  Expression residual;  // on-shell residual, zero iff verdict == Yes
  // Nonzero coefficients of the residual, split by monomials in the
  // second-order derivatives; each entry is (monomial, coefficient).
  std::vector<std::pair<Expression, Expression>> broken;
  // For a Conditional verdict: the broken coefficients rendered as the
  // conditions "<coefficient> = 0" on the free functions of the field.
  std::vector<std::string> constraints;
};

// Decides whether X is a symmetry of u_t = f*(u_xx + u_yy). Conditional means
// every broken coefficient involves an unknown function occurring in the
// coefficients of X itself, so conditions on those functions could still close
// the gap; No means some broken coefficient involves only the equation data.
SymmetryCheck is_symmetry(const VectorField& X, const Expression& f);

struct DeterminingSystem {
  std::unique_ptr<Chart> chart;
  VectorField ansatz;   // xi1 d_x + xi2 d_y + tau d_t + phi d_u, all unknown
  Expression f;         // unknown right-hand-side factor f(x, y, u, u_x, u_y)
  Expression residual;  // on-shell residual of the ansatz
  // Coefficients of the residual by monomials in the second-order
  // derivatives; a point operator is a symmetry for every f of the class iff
  // its coefficient functions make all of these vanish.
  std::vector<std::pair<Expression, Expression>> equations;
};

// Builds the determining system of the full class: a general point operator
// with coefficients xi1(x,y,t,u), xi2(x,y,t,u), tau(x,y,t,u), phi(x,y,t,u) is
// prolonged, applied to the equation, restricted to solutions and split by
// monomials in the second-order derivatives.
DeterminingSystem determining_system();

struct EquivalenceCheck {
  bool ok = false;      // all three residuals vanish
  Expression residual;  // on-shell residual of the prolonged operator
  Expression mu_t;      // obstruction to the new factor staying t-free
  Expression mu_ut;     // obstruction to the new factor staying u_t-free
};

// Checks whether Y (a point operator on x, y, t, u, f) generates an
// equivalence transformation of the class: it must map solutions to solutions
// while the transformed factor stays a function of x, y, u, u_x, u_y alone.
EquivalenceCheck equivalence_residuals(const VectorField& Y);

}  // namespace lieclass
