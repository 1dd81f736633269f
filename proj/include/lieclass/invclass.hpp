#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "lieclass/catalogs.hpp"
#include "lieclass/determining.hpp"

namespace lieclass {

// Classification of u_t = f*(u_xx + u_yy) by first integrals: operators on the
// equivalence space project to (x, y, u, f), their flows' first integrals give
// the invariant I1 = I1(x, y, u) and the solved form f = weight(x, y) * Phi(I1),
// and each classified form carries an additional symmetry operator on
// (x, y, t, u) beyond the time translation.

struct TDependentProjection : std::runtime_error {
  explicit TDependentProjection(const std::string& what) : std::runtime_error(what) {}
};

struct StrategyExhausted : std::runtime_error {
  explicit StrategyExhausted(const std::string& what) : std::runtime_error(what) {}
};

struct FNotSolvable : std::runtime_error {
  explicit FNotSolvable(const std::string& what) : std::runtime_error(what) {}
};

// Chart of the projected space: coordinates x, y, the dependent u and the
// classification coordinate f (no time).
const char* projected_chart_text();
std::unique_ptr<Chart> make_projected_chart();

// Chart on which additional operators act: x, y, t, u with the profile
// function Phi of the classified right-hand sides.
const char* symmetry_chart_text();
std::unique_ptr<Chart> make_symmetry_chart();

struct ProjectedField {
  VectorField field;       // on the projected chart
  bool degenerate = false; // zero or a pure f-scaling: no classifying content
};

// Drops the d_t component of an operator on (x, y, t, u, f) and moves the rest
// onto pch; a surviving coefficient that depends on t has no projection.
ProjectedField project(Chart& pch, const VectorField& y);

// Up to three functionally independent exact first integrals of the flow of z,
// found by a small strategy library (absent coordinates, eigen-coordinate
// ratios, exponential Jordan weights, clock-coordinate quadratures). Every
// returned I satisfies apply(z, I) == 0 exactly; independence is a full-rank
// Jacobian at random rational sample points. Throws StrategyExhausted when no
// strategy applies.
std::vector<Expression> first_integrals(Chart& pch, const VectorField& z);

// normalize(apply(z, i)); zero iff i is constant along the flow of z.
Expression annihilator_check(const VectorField& z, const Expression& i);

// Decomposition of a projected field over the projections of the equivalence
// basis B1..B6. The six projections are linearly independent, so the
// coefficients are unique when the components are consistent; an inconsistent
// component (a printing defect in a catalog row) is dropped and noted.
struct LiftResult {
  std::vector<mpq_class> coeffs;  // over B1..B6; empty if no affine structure
  bool exact = false;             // recomposed projection equals the input
  std::string note;
};
LiftResult lift_projection(Chart& pch, const VectorField& z);

// The operator on (x, y, t, u) induced by a lift: B1 contributes its full
// flow, B5 the time scaling t d_t.
VectorField lifted_operator(Chart& sch, const std::vector<mpq_class>& coeffs);

struct ClassificationRow {
  int id = 0;
  std::unique_ptr<Chart> pchart;  // x, y, u, f
  std::unique_ptr<Chart> schart;  // x, y, t, u, Phi
  VectorField z;                  // on *pchart
  Expression i1, i2, weight;      // on *pchart; i2 == f / weight
  VectorField xadd;               // on *schart
  Expression f_form;              // on *schart: weight * Phi(i1)
  bool i1_ok = false, i2_ok = false, sym_ok = false;
  Expression i1_residual, i2_residual;  // annihilator residuals on *pchart
  SymmetryCheck sym;                    // residual data on *schart
};

// Assembles one classification row from the projected operator, the claimed
// invariants and the additional operator (all as field-language texts), and
// computes the three verdicts: apply(Z, I1) == 0, apply(Z, I2) == 0, and
// is_symmetry(Xadd) for u_t = weight * Phi(I1) * (u_xx + u_yy). I2 must be
// linear in f so the classified form solves to f = weight * Phi(I1).
ClassificationRow build_row(int id, const std::string& z, const std::string& i1,
                            const std::string& i2, const std::string& xadd);

// Literal reading of a printed classified equation: is xadd a symmetry of
// u_t = weight * Phi(u_xx + u_yy), with Phi applied to the Laplacian itself?
bool literal_symmetry(const VectorField& xadd, const Expression& weight);

struct RowReading {
  bool i1 = false, i2 = false, sym = false;
  std::string i1_residual, i2_residual, sym_witness;
};

struct Table3RowAudit {
  int id = 0;
  std::string z;                // normalized rendering of the printed operator
  int item = 0;                 // optimal-system item with the same projection
  bool item_exact = false;      // projection equals the printed field verbatim
  RowReading printed;           // verdicts for the printed row as stated
  std::vector<std::string> integrals;  // recomputed first integrals of Z
  std::string recomputed_i1, recomputed_weight, recomputed_x;
  RowReading recomputed;        // verdicts for the recomputed reading
  bool literal_sym = false;     // printed operator vs. the literal equation
  std::vector<std::string> notes;
};

struct Table3Audit {
  std::vector<Table3RowAudit> rows;
  std::vector<int> row_to_item;  // 1-based item per row; 0 = no match
  std::size_t printed_all_pass = 0;
  std::size_t recomputed_all_pass = 0;
  std::size_t literal_pass = 0;
  std::vector<std::string> notes;
};

// Re-derives the whole classification table: for every printed row, the
// verdict triple as printed, the strategy-library recomputation (invariants,
// weight and lifted additional operator from the row's own field), and the
// literal reading of the equation column. Rows are matched to optimal-system
// items by field content, not by index.
Table3Audit audit_table3();

}  // namespace lieclass
