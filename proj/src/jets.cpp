#include "lieclass/jets.hpp"

#include <cassert>

namespace lieclass {

Expression total_derivative(const Expression& e, GenId v) {
  Chart& ch = e.chart();
  const Generator& vg = ch.gen(v);
  if (vg.is_atom || vg.sym.kind != SymbolKind::Independent)
    throw std::invalid_argument("total derivative direction must be an independent variable");
  Expression acc = e.diff(v);
  for (GenId g : e.generator_support()) {
    const Generator& gen = ch.gen(g);
    if (gen.is_atom) continue;
    SymbolKind k = gen.sym.kind;
    if (k == SymbolKind::Classification || k == SymbolKind::ClassJet)
      throw std::invalid_argument(
          "total derivative is undefined over classification coordinates (" + gen.sym.name + ")");
    if (k != SymbolKind::Dependent && k != SymbolKind::Jet) continue;
    Expression de = e.diff(g);
    if (de.is_zero()) continue;
    GenId succ = ch.jet_step(g, v);
    acc = acc + de * Expression::sym(ch, succ);
  }
  return acc;
}

Expression total_derivative(const Expression& e, const std::string& v) {
  return total_derivative(e, e.chart().require(v));
}

VectorField prolong2(const VectorField& X) {
  Chart& ch = X.chart();
  for (const auto& [g, c] : X.comps()) {
    (void)c;
    const Generator& gen = ch.gen(g);
    if (gen.is_atom ||
        (gen.sym.kind != SymbolKind::Independent && gen.sym.kind != SymbolKind::Dependent))
      throw std::invalid_argument("prolong2 expects an operator on the base coordinates");
  }
  const auto& ind = ch.independents();
  VectorField P = X;
  for (GenId dep : ch.dependents()) {
    Expression phi = X.coeff(dep);
    // first order
    std::vector<Expression> phi1;
    for (std::size_t vi = 0; vi < ind.size(); ++vi) {
      Expression pv = total_derivative(phi, ind[vi]);
      for (std::size_t wi = 0; wi < ind.size(); ++wi) {
        Expression xw = X.coeff(ind[wi]);
        if (xw.is_zero()) continue;
        pv = pv - total_derivative(xw, ind[vi]) * Expression::sym(ch, ch.jet_step(dep, ind[wi]));
      }
      phi1.push_back(pv);
      P.set(ch.jet_step(dep, ind[vi]), pv);
    }
    // second order, one symmetric template for every pair
    for (std::size_t vi = 0; vi < ind.size(); ++vi) {
      for (std::size_t wi = vi; wi < ind.size(); ++wi) {
        Expression pvw = total_derivative(phi1[vi], ind[wi]);
        for (std::size_t zi = 0; zi < ind.size(); ++zi) {
          Expression xz = X.coeff(ind[zi]);
          if (xz.is_zero()) continue;
          GenId uzv = ch.jet_step(ch.jet_step(dep, ind[zi]), ind[vi]);
          pvw = pvw - total_derivative(xz, ind[wi]) * Expression::sym(ch, uzv);
        }
        GenId target = ch.jet_step(ch.jet_step(dep, ind[vi]), ind[wi]);
        P.set(target, pvw);
      }
    }
  }
  return P;
}

EquivalenceProlongation prolong_equivalence(const VectorField& Y) {
  Chart& ch = Y.chart();
  if (ch.classifications().size() != 1)
    throw std::invalid_argument("prolong_equivalence needs exactly one classification coordinate");
  GenId f = ch.classifications()[0];
  VectorField base(ch);
  for (const auto& [g, c] : Y.comps()) {
    if (g == f) continue;
    base.set(g, c);
  }
  VectorField P = prolong2(base);
  Expression mu = Y.coeff(f);
  P.set(f, mu);

  if (ch.independents().size() != 3 || ch.dependents().size() != 1)
    throw std::invalid_argument("prolong_equivalence expects a chart with (x, y, t) and one "
                                "dependent variable");
  GenId x = ch.independents()[0], y = ch.independents()[1], t = ch.independents()[2];
  GenId u = ch.dependents()[0];
  GenId ux = ch.jet_step(u, x), uy = ch.jet_step(u, y), ut = ch.jet_step(u, t);

  Expression fx = Expression::sym(ch, ch.class_jet(f, x));
  Expression fy = Expression::sym(ch, ch.class_jet(f, y));
  Expression fu = Expression::sym(ch, ch.class_jet(f, u));
  Expression fux = Expression::sym(ch, ch.class_jet(f, ux));
  Expression fuy = Expression::sym(ch, ch.class_jet(f, uy));

  Expression xi1 = Y.coeff(x), xi2 = Y.coeff(y), phi = Y.coeff(u);
  Expression phix = P.coeff(ux), phiy = P.coeff(uy);

  auto slot = [&](GenId dir) {
    return mu.diff(dir) - fx * xi1.diff(dir) - fy * xi2.diff(dir) - fu * phi.diff(dir) -
           fux * phix.diff(dir) - fuy * phiy.diff(dir);
  };
  EquivalenceProlongation out{std::move(P), slot(t), slot(ut)};
  return out;
}

}  // namespace lieclass
