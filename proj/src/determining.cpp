#include "lieclass/determining.hpp"

#include <set>
#include <stdexcept>

#include "lieclass/parser.hpp"

namespace lieclass {

namespace {

using E = Expression;

struct ClassFrame {
  GenId x, y, t, u, ut, uxx, uyy;
};

ClassFrame frame(Chart& ch) {
  if (ch.independents().size() != 3 || ch.dependents().size() != 1)
    throw std::invalid_argument("the class lives on three base coordinates and one dependent");
  ClassFrame fr;
  fr.x = ch.independents()[0];
  fr.y = ch.independents()[1];
  fr.t = ch.independents()[2];
  fr.u = ch.dependents()[0];
  fr.ut = ch.jet_step(fr.u, fr.t);
  fr.uxx = ch.jet_step(ch.jet_step(fr.u, fr.x), fr.x);
  fr.uyy = ch.jet_step(ch.jet_step(fr.u, fr.y), fr.y);
  return fr;
}

std::vector<GenId> second_order_jets(const Chart& ch) {
  std::vector<GenId> out;
  for (GenId g = 0; g < ch.size(); ++g)
    if (ch.is_symbol(g) && ch.jet_order(g) == 2) out.push_back(g);
  return out;
}

Expression monomial_expr(Chart& ch, const std::vector<std::pair<GenId, int>>& m) {
  E r = E::integer(ch, 1);
  for (auto [g, k] : m) r = r * E::sym(ch, g).pow(k);
  return r;
}

// Declared functions whose atoms occur in e.
std::set<std::uint32_t> functions_in(const Expression& e) {
  std::set<std::uint32_t> out;
  if (!e.valid()) return out;
  const Chart& ch = e.chart();
  for (GenId g : e.generator_support())
    if (!ch.is_symbol(g)) out.insert(ch.gen(g).atom.func);
  return out;
}

std::vector<std::pair<Expression, Expression>> split_second_order(const Expression& r) {
  Chart& ch = r.chart();
  std::vector<std::pair<Expression, Expression>> out;
  for (const auto& [mono, coeff] : r.split_by(second_order_jets(ch))) {
    if (coeff.is_zero()) continue;
    out.emplace_back(monomial_expr(ch, mono), coeff);
  }
  return out;
}

}  // namespace

Expression symmetry_residual(const VectorField& X, const Expression& f) {
  Chart& ch = X.chart();
  if (!f.valid() || &f.chart() != &ch)
    throw std::invalid_argument("field and right-hand side live on different charts");
  ClassFrame fr = frame(ch);
  E rhs = f * (E::sym(ch, fr.uxx) + E::sym(ch, fr.uyy));
  E F = E::sym(ch, fr.ut) - rhs;
  E r = apply(prolong2(X), F);
  return r.substitute({{E::sym(ch, fr.ut), rhs}});
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    default: return "conditional";
  }
}

SymmetryCheck is_symmetry(const VectorField& X, const Expression& f) {
  SymmetryCheck out;
  out.residual = symmetry_residual(X, f);
  if (out.residual.is_zero()) {
    out.verdict = Verdict::Yes;
    return out;
  }
  std::set<std::uint32_t> field_funcs;
  for (const auto& [g, c] : X.comps()) {
    (void)g;
    auto fs = functions_in(c);
    field_funcs.insert(fs.begin(), fs.end());
  }
  out.broken = split_second_order(out.residual);
  bool all_fixable = true;
  for (const auto& [mono, coeff] : out.broken) {
    (void)mono;
    bool fixable = false;
    for (std::uint32_t fn : functions_in(coeff))
      if (field_funcs.count(fn)) fixable = true;
    if (!fixable) all_fixable = false;
  }
  if (all_fixable) {
    out.verdict = Verdict::Conditional;
    for (const auto& [mono, coeff] : out.broken) {
      (void)mono;
      out.constraints.push_back(coeff.str() + " = 0");
    }
  } else {
    out.verdict = Verdict::No;
  }
  return out;
}

DeterminingSystem determining_system() {
  static const char* kText = R"(
    vars x y t;
    dep u;
    fun f(x, y, u, u_x, u_y);
    fun xi1(x, y, t, u);
    fun xi2(x, y, t, u);
    fun tau(x, y, t, u);
    fun phi(x, y, t, u);
  )";
  DeterminingSystem out;
  out.chart = parse_chart(kText);
  Chart& ch = *out.chart;
  out.ansatz = parse_field(ch, "ansatz", "xi1*d_x + xi2*d_y + tau*d_t + phi*d_u");
  out.f = parse_expression(ch, "f");
  out.residual = symmetry_residual(out.ansatz, out.f);
  out.equations = split_second_order(out.residual);
  return out;
}

EquivalenceCheck equivalence_residuals(const VectorField& Y) {
  Chart& ch = Y.chart();
  EquivalenceCheck out;
  EquivalenceProlongation ep = prolong_equivalence(Y);
  ClassFrame fr = frame(ch);
  E f = E::sym(ch, ch.classifications()[0]);
  E rhs = f * (E::sym(ch, fr.uxx) + E::sym(ch, fr.uyy));
  E F = E::sym(ch, fr.ut) - rhs;
  out.residual = apply(ep.full, F).substitute({{E::sym(ch, fr.ut), rhs}});
  out.mu_t = ep.mu_t;
  out.mu_ut = ep.mu_ut;
  out.ok = out.residual.is_zero() && out.mu_t.is_zero() && out.mu_ut.is_zero();
  return out;
}

}  // namespace lieclass
