#pragma once

#include <gmpxx.h>

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lieclass/chart.hpp"

namespace lieclass {

struct DegenerateDivision : std::runtime_error {
  DegenerateDivision() : std::runtime_error("division by an identically zero expression") {}
};
struct CyclicSubstitution : std::runtime_error {
  explicit CyclicSubstitution(const std::string& n)
      : std::runtime_error("substitution rule for " + n + " mentions " + n) {}
};
struct NotPolynomial : std::runtime_error {
  explicit NotPolynomial(const std::string& what) : std::runtime_error(what) {}
};

// One product term: rational coefficient, power-sorted monomial over
// generator ids, and an optional exponential part exp(*e). Exponential parts
// combine additively under multiplication, so two terms carry the same `e`
// exactly when their exponentials are equal; distinct canonical arguments are
// treated as independent generators of the coefficient ring.
struct Term {
  mpq_class c;
  std::vector<std::pair<GenId, int>> m;  // sorted by GenId, exponents > 0
  FractionPtr e;                         // nullptr means exp(0) = 1
};

struct Poly {
  std::vector<Term> ts;  // canonical: key-sorted descending, merged, no zero coefficients
  bool zero() const { return ts.empty(); }
};

// Quotient of polynomials in canonical form: gcd-reduced, denominator nonzero
// with leading coefficient one and leading exponential part shifted away.
// Equality of canonical forms is semantic equality.
struct Fraction {
  Poly n, d;
};

// Immutable expression handle over a chart. All arithmetic canonicalizes
// eagerly; is_zero() is therefore an exact decision.
class Expression {
 public:
  Expression() = default;

  static Expression constant(Chart& c, const mpq_class& q);
  static Expression integer(Chart& c, long v);
  static Expression sym(Chart& c, GenId id);
  static Expression sym(Chart& c, const std::string& name);
  // exp(arg); exp(0) = 1, exp(a)*exp(b) = exp(a+b) hold canonically.
  static Expression exp(const Expression& arg);
  // Undifferentiated function application; arity-checked.
  static Expression call(Chart& c, const std::string& func, const std::vector<Expression>& args);
  static Expression atom(Chart& c, std::uint32_t func, std::vector<int> dmulti,
                         const std::vector<Expression>& args);
  static Expression from_fraction(Chart& c, FractionPtr f);

  bool valid() const { return chart_ != nullptr; }
  Chart& chart() const { return *chart_; }
  const Fraction& fraction() const { return *f_; }
  FractionPtr share() const { return f_; }

  bool is_zero() const;
  bool is_rational() const;  // no generators, no exponentials
  mpq_class rational_value() const;
  bool same(const Expression& o) const;

  Expression operator-() const;
  Expression pow(long k) const;

  // Partial derivative treating every generator as independent; chains
  // through exponential arguments and unknown-function arguments.
  Expression diff(GenId v) const;
  Expression diff(const std::string& v) const;

  // Simultaneous substitution. Keys must be plain symbols or whole atoms; a
  // rule whose right side mentions its own key throws CyclicSubstitution.
  Expression substitute(const std::vector<std::pair<Expression, Expression>>& rules) const;

  bool mentions(GenId g) const;             // including atom arguments and exponentials
  std::set<GenId> generator_support() const;

  // Splits a polynomial-in-`markers` expression into coefficient rows keyed
  // by the exact marker sub-monomial (empty monomial = marker-free part).
  // Throws NotPolynomial if the denominator involves a marker.
  std::vector<std::pair<std::vector<std::pair<GenId, int>>, Expression>> split_by(
      const std::vector<GenId>& markers) const;

  // Exact evaluation at a rational point. Every symbol and atom generator
  // that occurs must be present in `point`; exponentials must have argument
  // zero. For general exponentials use eval_double.
  mpq_class eval_exact(const std::map<GenId, mpq_class>& point) const;
  double eval_double(const std::map<GenId, mpq_class>& point) const;

  std::string str() const;

 private:
  Expression(Chart* c, FractionPtr f) : chart_(c), f_(std::move(f)) {}

  Chart* chart_ = nullptr;
  FractionPtr f_;
};

Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);

// Re-runs canonicalization on an already canonical value (identity; kept as a
// checkable invariant).
Expression normalize(const Expression& e);

// Groups `e` by the given marker monomials: result maps each marker (and the
// empty product for the remainder) to its coefficient. A term whose marker
// part is neither trivial nor listed throws NotPolynomial.
std::vector<std::pair<Expression, Expression>> collect(const Expression& e,
                                                       const std::vector<Expression>& markers);

std::string to_string(const Fraction& f, const Chart& c);

}  // namespace lieclass
