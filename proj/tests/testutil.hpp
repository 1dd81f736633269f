#pragma once

// Shared property-check helpers used by both the module tests and the
// acceptance runner.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lieclass/jets.hpp"
#include "lieclass/parser.hpp"

namespace testutil {

using namespace lieclass;

struct OracleReport {
  int samples = 0;
  int violations = 0;
  std::string note;
};

// Flow-based oracle for the second prolongation. For a random polynomial
// operator X and a random polynomial surface u0, push u0 forward through the
// first-order flow of X (exact rational arithmetic throughout, time step
// eps), read off all derivatives up to order two of the transported surface
// at the transported point, and compare with jet + eps * prolong2(X)
// applied to the jet of u0. Everything is exact, so the only slack is the
// genuine O(eps^2) flow error, far below the 1e-6 acceptance tolerance.
inline OracleReport run_jet_flow_oracle(int samples, std::uint64_t seed) {
  OracleReport rep;
  Chart ch;
  GenId x = ch.add_independent("x");
  GenId y = ch.add_independent("y");
  GenId t = ch.add_independent("t");
  GenId u = ch.add_dependent("u");
  ch.generate_jets();
  GenId A = ch.add_parameter("A");
  GenId B = ch.add_parameter("B");
  GenId C = ch.add_parameter("C");

  std::mt19937_64 rng(seed);
  auto pick = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
  auto rnd_q = [&]() {
    mpq_class v(pick(-1, 1), pick(1, 3));
    v.canonicalize();
    return v;
  };
  auto rand_poly = [&](const std::vector<GenId>& vars, int maxdeg, int nterms) {
    Expression acc = Expression::integer(ch, 0);
    for (int i = 0; i < nterms; ++i) {
      Expression term = Expression::constant(ch, rnd_q());
      int d = static_cast<int>(pick(0, maxdeg));
      for (int j = 0; j < d; ++j)
        term = term * Expression::sym(ch, vars[pick(0, static_cast<long>(vars.size()) - 1)]);
      acc = acc + term;
    }
    return acc;
  };

  const mpq_class eps(1, 1000000);
  const mpq_class tol(1, 1000000);
  Expression Ea = Expression::sym(ch, A), Eb = Expression::sym(ch, B), Ec = Expression::sym(ch, C);
  Expression Ex = Expression::sym(ch, x), Ey = Expression::sym(ch, y), Et = Expression::sym(ch, t);
  Expression eeps = Expression::constant(ch, eps);

  for (int s = 0; s < samples; ++s) {
    VectorField X(ch);
    X.set(x, rand_poly({x, y, t, u}, 2, 2));
    X.set(y, rand_poly({x, y, t, u}, 2, 2));
    X.set(t, rand_poly({x, y, t, u}, 2, 2));
    X.set(u, rand_poly({x, y, t, u}, 2, 2));
    Expression u0 = rand_poly({x, y, t}, 3, 4);

    std::map<GenId, mpq_class> p0{{x, rnd_q()}, {y, rnd_q()}, {t, rnd_q()}};
    // jet of u0 at p0
    std::map<GenId, mpq_class> jetpt = p0;
    jetpt[u] = u0.eval_exact(p0);
    std::vector<GenId> dirs{x, y, t};
    for (GenId v : dirs) jetpt[ch.jet_step(u, v)] = u0.diff(v).eval_exact(p0);
    for (std::size_t i = 0; i < dirs.size(); ++i)
      for (std::size_t j = i; j < dirs.size(); ++j)
        jetpt[ch.jet_step(ch.jet_step(u, dirs[i]), dirs[j])] =
            u0.diff(dirs[i]).diff(dirs[j]).eval_exact(p0);

    VectorField P = prolong2(X);

    // transported surface over fresh target coordinates (A, B, C)
    Expression u0abc = u0.substitute({{Ex, Ea}, {Ey, Eb}, {Et, Ec}});
    auto lift = [&](const Expression& c) {
      return c.substitute({{Ex, Ea}, {Ey, Eb}, {Et, Ec}, {Expression::sym(ch, u), u0abc}});
    };
    Expression xi1 = lift(X.coeff(x)), xi2 = lift(X.coeff(y)), xi3 = lift(X.coeff(t));
    Expression phi = lift(X.coeff(u));
    Expression ubar = u0.substitute({{Ex, Ea - eeps * xi1},
                                     {Ey, Eb - eeps * xi2},
                                     {Et, Ec - eeps * xi3}}) +
                      eeps * phi;

    std::map<GenId, mpq_class> pbar{
        {A, p0[x] + eps * X.coeff(x).eval_exact(jetpt)},
        {B, p0[y] + eps * X.coeff(y).eval_exact(jetpt)},
        {C, p0[t] + eps * X.coeff(t).eval_exact(jetpt)}};

    struct Probe {
      Expression lhs;     // derivative of ubar in target coordinates
      GenId jet;          // corresponding jet symbol
    };
    std::vector<Probe> probes;
    probes.push_back({ubar, u});
    std::vector<std::pair<GenId, GenId>> tdirs{{A, x}, {B, y}, {C, t}};
    for (auto [tv, bv] : tdirs) probes.push_back({ubar.diff(tv), ch.jet_step(u, bv)});
    for (std::size_t i = 0; i < tdirs.size(); ++i)
      for (std::size_t j = i; j < tdirs.size(); ++j)
        probes.push_back({ubar.diff(tdirs[i].first).diff(tdirs[j].first),
                          ch.jet_step(ch.jet_step(u, tdirs[i].second), tdirs[j].second)});

    for (const auto& pr : probes) {
      mpq_class lhs = pr.lhs.eval_exact(pbar);
      mpq_class rhs = jetpt[pr.jet] + eps * P.coeff(pr.jet).eval_exact(jetpt);
      mpq_class err = lhs - rhs;
      if (err < 0) err = -err;
      ++rep.samples;
      if (err > tol) {
        ++rep.violations;
        if (rep.note.empty())
          rep.note = "sample " + std::to_string(s) + ", jet " + ch.name(pr.jet) +
                     ", error " + err.get_str();
      }
    }
  }
  return rep;
}

}  // namespace testutil
