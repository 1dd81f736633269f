#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lieclass/field.hpp"

namespace lieclass {

// Lie bracket of first-order operators: [a, b] = a(b^i) d_i - b(a^i) d_i.
VectorField bracket(const VectorField& a, const VectorField& b);

struct NonClosed : std::runtime_error {
  std::size_t i, j;
  std::string rendered;  // the offending bracket
  NonClosed(std::size_t i_, std::size_t j_, std::string rendered_);
};

// c[i][j][k] with [B_i, B_j] = sum_k c[i][j][k] B_k, solved exactly over the
// rationals. Throws NonClosed when some bracket leaves the span and
// invalid_argument when the fields are dependent or not polynomial.
struct StructureConstants {
  std::size_t dim = 0;
  std::vector<std::vector<std::vector<mpq_class>>> c;
};
StructureConstants structure_constants(const std::vector<VectorField>& basis);

// Matrix of ad(B_i) on coefficient vectors: (A_i)_{k,j} = c[i][j][k].
std::vector<std::vector<mpq_class>> ad_matrix(const StructureConstants& sc, std::size_t i);

// Exact scalar sum q * s^n * e^{m*s} with rational q, n >= 0 and integer m.
// Closed under ring operations; the zero-coefficient terms are dropped, so
// operator== decides equality exactly.
class PolyExp {
 public:
  PolyExp() = default;
  static PolyExp constant(const mpq_class& q);
  static PolyExp term(const mpq_class& q, long n, long m);

  bool is_zero() const { return ts_.empty(); }
  bool operator==(const PolyExp& o) const { return ts_ == o.ts_; }
  bool operator!=(const PolyExp& o) const { return !(*this == o); }
  PolyExp operator+(const PolyExp& o) const;
  PolyExp operator-(const PolyExp& o) const;
  PolyExp operator*(const PolyExp& o) const;

  // Taylor coefficients of s^0 .. s^order at s = 0.
  std::vector<mpq_class> taylor(int order) const;
  double eval(double s) const;
  std::string str() const;

  const std::map<std::pair<long, long>, mpq_class>& terms() const { return ts_; }

 private:
  std::map<std::pair<long, long>, mpq_class> ts_;  // (n, m) -> q
};

struct NonIntegerSpectrum : std::runtime_error {
  explicit NonIntegerSpectrum(const std::string& poly)
      : std::runtime_error("matrix spectrum is not integer; remaining factor " + poly) {}
};

// exp(s*M) for an exact rational matrix, via the Putzer recursion; requires
// an integer spectrum (found by exact deflation) and is exact otherwise.
std::vector<std::vector<PolyExp>> exp_matrix(const std::vector<std::vector<mpq_class>>& M);

// Action of the inner automorphism generated by B_i on coefficient vectors:
// conjugating by the one-parameter group element at s multiplies coefficient
// vectors by exp(-s * ad(B_i)).
std::vector<std::vector<PolyExp>> adjoint_exp(const StructureConstants& sc, std::size_t i);

}  // namespace lieclass
