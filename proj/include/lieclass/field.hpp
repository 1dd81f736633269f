#pragma once

#include <map>
#include <string>

#include "lieclass/expr.hpp"

namespace lieclass {

// First-order differential operator: one coefficient expression per chart
// coordinate. Only nonzero components are stored.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(Chart& c) : chart_(&c) {}

  bool valid() const { return chart_ != nullptr; }
  Chart& chart() const { return *chart_; }

  void set(GenId g, const Expression& e);
  Expression coeff(GenId g) const;  // zero when the component is absent
  const std::map<GenId, Expression>& comps() const { return comps_; }
  bool is_zero() const { return comps_.empty(); }

  std::string name;

 private:
  Chart* chart_ = nullptr;
  std::map<GenId, Expression> comps_;
};

VectorField add(const VectorField& a, const VectorField& b);
VectorField scale(const VectorField& a, const Expression& s);
VectorField scale(const VectorField& a, const mpq_class& s);
bool same(const VectorField& a, const VectorField& b);

// Applies the operator as a derivation: sum of coeff * d(expr)/d(coordinate).
Expression apply(const VectorField& v, const Expression& e);


}  // namespace lieclass
