#include "lieclass/optsys.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lieclass {
namespace {

using E = Expression;

mpq_class qpow(const mpq_class& q, long e) {
  mpq_class base = q;
  long n = e;
  if (n < 0) {
    if (base == 0) throw std::invalid_argument("zero ray value");
    base = 1 / base;
    n = -n;
  }
  mpq_class r(1);
  for (long k = 0; k < n; ++k) r *= base;
  return r;
}

// Exact value of a polynomial-in-s entry at s = value.
mpq_class eval_poly_entry(const PolyExp& p, const mpq_class& s) {
  mpq_class v(0);
  for (const auto& [key, q] : p.terms()) {
    if (key.second != 0)
      throw std::invalid_argument("generator has exponential action; use a ray move");
    v += q * qpow(s, key.first);
  }
  return v;
}

// Exact value of a pure-exponential entry at e^s = ray.
mpq_class eval_ray_entry(const PolyExp& p, const mpq_class& ray) {
  mpq_class v(0);
  for (const auto& [key, q] : p.terms()) {
    if (key.first != 0)
      throw std::invalid_argument("generator has polynomial action; use a parameter move");
    v += q * qpow(ray, key.second);
  }
  return v;
}

bool unit_or_zero(const mpq_class& q) { return q == 0 || q == 1 || q == -1; }

std::string qstr(const mpq_class& q) { return q.get_str(); }

// Renders sum_k c_k * <prefix><k+1>; coordinates flagged in `symbolic` print
// as a<k+1> placeholders instead of their value.
std::string combo_string(const CoeffVector& a, const std::string& prefix,
                         const std::vector<bool>* symbolic) {
  std::string out;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == 0) continue;
    bool sym = symbolic && (*symbolic)[k];
    std::string base = prefix + std::to_string(k + 1);
    std::string piece;
    if (sym) {
      piece = "a" + std::to_string(k + 1) + "*" + base;
      if (!out.empty()) out += " + ";
    } else {
      mpq_class c = a[k];
      bool neg = c < 0;
      if (neg) c = -c;
      if (out.empty())
        out += neg ? "-" : "";
      else
        out += neg ? " - " : " + ";
      piece = (c == 1) ? base : qstr(c) + "*" + base;
    }
    out += piece;
  }
  return out.empty() ? "0" : out;
}

void match_items(ReductionTrace& t, const std::vector<CoeffVector>& items) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (t.output == items[i]) {
      t.item = static_cast<int>(i) + 1;
      return;
    }
  }
  const std::size_t n = t.output.size();
  auto support_of = [n](const CoeffVector& v) {
    std::vector<bool> s(n);
    for (std::size_t k = 0; k < n; ++k) s[k] = v[k] != 0;
    return s;
  };
  const std::vector<bool> sup = support_of(t.output);
  for (std::size_t i = 0; i < items.size(); ++i)
    if (support_of(items[i]) == sup) t.candidates.push_back(static_cast<int>(i) + 1);

  if (!t.candidates.empty()) {
    for (std::size_t k = 0; k < n; ++k) {
      if (t.output[k] == 0) continue;
      bool seen = false;
      for (int c : t.candidates) seen = seen || items[c - 1][k] == t.output[k];
      if (!seen) t.residues.emplace_back(k, t.output[k]);
    }
    t.note = "normal form reached; the remaining coordinates are orbit constants";
  } else {
    t.note = "no listed representative shares this support";
  }
  t.family = combo_string(t.output, "Y", nullptr);
}

// Aggregation key: residue coordinates (or, with no candidates, non-unit
// coordinates) render as placeholders so each orbit family is one key.
std::string family_key(const ReductionTrace& t) {
  std::vector<bool> symbolic(t.output.size(), false);
  if (!t.candidates.empty()) {
    for (const auto& [k, v] : t.residues) {
      (void)v;
      symbolic[k] = true;
    }
  } else {
    for (std::size_t k = 0; k < t.output.size(); ++k) symbolic[k] = !unit_or_zero(t.output[k]);
  }
  return combo_string(t.output, "Y", &symbolic);
}

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

CoeffVector draw_vector(std::uint64_t state, std::size_t dim) {
  CoeffVector a(dim);
  while (true) {
    bool nonzero = false;
    for (auto& q : a) {
      long num = static_cast<long>(splitmix64(state) % 19) - 9;
      long den = static_cast<long>(splitmix64(state) % 9) + 1;
      q = mpq_class(num, den);
      q.canonicalize();
      nonzero = nonzero || q != 0;
    }
    if (nonzero) return a;
  }
}

CoeffVector reflect(const CoeffVector& a, const std::vector<int>& signs) {
  CoeffVector b = a;
  for (std::size_t k = 0; k < b.size() && k < signs.size(); ++k)
    if (signs[k] < 0) b[k] = -b[k];
  return b;
}

Expression polyexp_expr(Chart& ch, GenId s, const PolyExp& p) {
  Expression sv = E::sym(ch, s);
  Expression r = E::integer(ch, 0);
  for (const auto& [key, q] : p.terms()) {
    Expression t = E::constant(ch, q) * sv.pow(key.first);
    if (key.second != 0) t = t * E::exp(E::integer(ch, key.second) * sv);
    r = r + t;
  }
  return r;
}

}  // namespace

AdjointMoves::AdjointMoves(const StructureConstants& sc) : dim_(sc.dim) {
  mats_.reserve(dim_);
  for (std::size_t i = 0; i < dim_; ++i) mats_.push_back(adjoint_exp(sc, i));
}

CoeffVector AdjointMoves::apply(const CoeffVector& a, const Move& m) const {
  if (a.size() != dim_) throw std::invalid_argument("coefficient vector has wrong dimension");
  if (m.kind == Move::Kind::Scale) {
    if (m.value == 0) throw std::invalid_argument("scale move must be nonzero");
    CoeffVector b = a;
    for (auto& q : b) q *= m.value;
    return b;
  }
  if (m.generator >= dim_) throw std::invalid_argument("move generator out of range");
  if (m.kind == Move::Kind::AdjRay && m.value <= 0)
    throw std::invalid_argument("ray move needs a positive value");
  const auto& M = mats_[m.generator];
  CoeffVector b(dim_, mpq_class(0));
  for (std::size_t k = 0; k < dim_; ++k) {
    for (std::size_t j = 0; j < dim_; ++j) {
      if (M[k][j].is_zero() || a[j] == 0) continue;
      mpq_class entry = m.kind == Move::Kind::Adj ? eval_poly_entry(M[k][j], m.value)
                                                  : eval_ray_entry(M[k][j], m.value);
      b[k] += entry * a[j];
    }
  }
  return b;
}

CoeffVector AdjointMoves::replay(const CoeffVector& a, const std::vector<Move>& moves) const {
  CoeffVector b = a;
  for (const auto& m : moves) b = apply(b, m);
  return b;
}

std::string linear_combination(const CoeffVector& a, const std::string& prefix) {
  return combo_string(a, prefix, nullptr);
}

ReductionTrace reduce(const AdjointMoves& mv, const CoeffVector& a0,
                      const std::vector<CoeffVector>& items) {
  if (mv.dim() != 6)
    throw std::invalid_argument("the reduction tree is specific to the six-dimensional algebra");
  if (a0.size() != 6) throw std::invalid_argument("coefficient vector has wrong dimension");
  if (std::all_of(a0.begin(), a0.end(), [](const mpq_class& q) { return q == 0; }))
    throw std::invalid_argument("reduction needs a nonzero vector");

  ReductionTrace t;
  t.input = a0;
  CoeffVector a = a0;
  auto scl = [&](const mpq_class& l) {
    if (l == 1) return;
    Move m{Move::Kind::Scale, 0, l};
    a = mv.apply(a, m);
    t.moves.push_back(m);
  };
  auto adj = [&](std::size_t g, const mpq_class& s) {
    if (s == 0) return;
    Move m{Move::Kind::Adj, g, s};
    a = mv.apply(a, m);
    t.moves.push_back(m);
  };
  auto ray = [&](const mpq_class& q) {
    if (q == 1) return;
    Move m{Move::Kind::AdjRay, 0, q};
    a = mv.apply(a, m);
    t.moves.push_back(m);
  };

  if (a[0] != 0) {
    // leading coordinate to 1, then the translations sweep a3, a4, a6 away;
    // the a4 flow also shifts a3, so it goes first
    scl(1 / a[0]);
    adj(3, a[3]);
    adj(2, a[2]);
    adj(5, a[5]);
  } else if (a[3] != 0) {
    // a4 to -1; the a2 flow moves a3 by multiples of a4
    scl(-1 / a[3]);
    adj(1, a[2]);
    // a joint positive rescale of (a3, a4, a6) followed by a global scale
    // keeps a4 = -1 and divides (a2, a5) by the same positive factor
    mpq_class q = a[1] != 0 ? abs(a[1]) : abs(a[4]);
    if (q != 0) {
      ray(q);
      scl(1 / q);
    }
  } else if (a[1] != 0) {
    // a2 to 1; the a4 flow moves a3 by multiples of a2; a6 rescales alone
    scl(1 / a[1]);
    adj(3, a[2]);
    if (a[5] != 0) ray(1 / abs(a[5]));
  } else {
    // only a3, a5, a6 can be present; a5 admits a global scale, (a3, a6)
    // a joint positive one, and nothing moves their ratio
    if (a[4] != 0) {
      scl(1 / a[4]);
      if (a[2] != 0)
        ray(1 / abs(a[2]));
      else if (a[5] != 0)
        ray(1 / abs(a[5]));
    } else if (a[2] != 0) {
      scl(1 / a[2]);
    } else {
      scl(1 / a[5]);
    }
  }

  t.output = a;
  match_items(t, items);
  return t;
}

OrbitInvariants orbit_invariants(const StructureConstants& sc) {
  OrbitInvariants oi;
  oi.chart = std::make_unique<Chart>();
  Chart& ch = *oi.chart;
  oi.s = ch.add_independent("s");
  std::vector<GenId> tmp;
  for (std::size_t k = 0; k < sc.dim; ++k) {
    oi.a.push_back(ch.add_independent("a" + std::to_string(k + 1)));
    tmp.push_back(ch.add_parameter("w" + std::to_string(k + 1)));
  }

  std::vector<std::vector<std::vector<PolyExp>>> mats;
  for (std::size_t i = 0; i < sc.dim; ++i) mats.push_back(adjoint_exp(sc, i));

  const PolyExp one = PolyExp::constant(1);
  std::vector<std::size_t> fixed;
  for (std::size_t k = 0; k < sc.dim; ++k) {
    bool identity_row = true;
    for (std::size_t i = 0; i < sc.dim && identity_row; ++i)
      for (std::size_t j = 0; j < sc.dim && identity_row; ++j)
        identity_row = mats[i][k][j] == (j == k ? one : PolyExp());
    if (identity_row) fixed.push_back(k);
  }

  std::vector<Expression> inv;
  for (std::size_t t = 1; t < fixed.size(); ++t)
    inv.push_back(E::sym(ch, oi.a[fixed[t]]) / E::sym(ch, oi.a[fixed[0]]));
  inv.push_back(E::integer(ch, 1));

  // every candidate must be exactly constant along every flow: substitute the
  // flowed coordinates (via temporaries, the flow of a_k mentions a_k) and
  // check both equality and a vanishing s-derivative at symbolic s
  for (std::size_t i = 0; i < sc.dim; ++i) {
    std::vector<std::pair<Expression, Expression>> to_tmp, from_tmp;
    for (std::size_t k = 0; k < sc.dim; ++k) {
      Expression flowed = E::integer(ch, 0);
      for (std::size_t j = 0; j < sc.dim; ++j)
        if (!mats[i][k][j].is_zero())
          flowed = flowed + polyexp_expr(ch, oi.s, mats[i][k][j]) * E::sym(ch, oi.a[j]);
      to_tmp.emplace_back(E::sym(ch, oi.a[k]), E::sym(ch, tmp[k]));
      from_tmp.emplace_back(E::sym(ch, tmp[k]), flowed);
    }
    for (const auto& f : inv) {
      Expression fs = f.substitute(to_tmp).substitute(from_tmp);
      if (!fs.same(f) || !fs.diff(oi.s).is_zero())
        throw std::logic_error("orbit invariant candidate drifts along a flow");
    }
  }

  oi.invariants = std::move(inv);
  return oi;
}

namespace {

struct Tally {
  std::size_t matched = 0, with_residue = 0, unmatched = 0;
  std::size_t replay_failures = 0, reflection_matches = 0;
  std::vector<std::size_t> item_hits;
  std::map<std::string, std::size_t> families, unmatched_families;
};

void run_sample(const AdjointMoves& mv, const std::vector<CoeffVector>& items,
                const std::vector<std::vector<int>>& reflections, std::uint64_t seed,
                std::size_t index, Tally& tally) {
  const std::uint64_t state = seed + 0x9e3779b97f4a7c15ull * (index + 1);
  const CoeffVector a = draw_vector(state, mv.dim());
  ReductionTrace t = reduce(mv, a, items);
  if (mv.replay(t.input, t.moves) != t.output) ++tally.replay_failures;
  if (t.item == 0) {
    for (const auto& r : reflections) {
      ReductionTrace tr = reduce(mv, reflect(a, r), items);
      if (tr.item != 0) {
        t = std::move(tr);
        ++tally.reflection_matches;
        break;
      }
    }
  }
  if (t.item != 0) {
    ++tally.matched;
    ++tally.item_hits[t.item];
  } else if (!t.residues.empty()) {
    ++tally.with_residue;
    ++tally.families[family_key(t)];
  } else {
    ++tally.unmatched;
    ++tally.unmatched_families[family_key(t)];
  }
}

void merge(OptSysAudit& rep, const Tally& t) {
  rep.matched += t.matched;
  rep.with_residue += t.with_residue;
  rep.unmatched += t.unmatched;
  rep.replay_failures += t.replay_failures;
  rep.reflection_matches += t.reflection_matches;
  for (std::size_t i = 0; i < t.item_hits.size(); ++i) rep.item_hits[i] += t.item_hits[i];
  for (const auto& [k, v] : t.families) rep.families[k] += v;
  for (const auto& [k, v] : t.unmatched_families) rep.unmatched_families[k] += v;
}

}  // namespace

OptSysAudit audit_optimal_system(const StructureConstants& sc,
                                 const std::vector<CoeffVector>& items, std::size_t samples,
                                 std::uint64_t seed,
                                 const std::vector<std::vector<int>>& reflections) {
  AdjointMoves mv(sc);
  OptSysAudit rep;
  rep.seed = seed;
  rep.samples = samples;
  rep.reflections = !reflections.empty();
  rep.item_hits.assign(items.size() + 1, 0);

  OrbitInvariants oi = orbit_invariants(sc);
  for (const auto& f : oi.invariants) rep.invariants.push_back(f.str());

  // mutual equivalence among the listed representatives: equal normal forms,
  // directly or after a reflection
  std::vector<CoeffVector> canon;
  canon.reserve(items.size());
  for (const auto& it : items) canon.push_back(reduce(mv, it, items).output);
  std::set<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t j = i + 1; j < items.size(); ++j) {
      bool equivalent = canon[i] == canon[j];
      for (const auto& r : reflections)
        equivalent = equivalent || reduce(mv, reflect(items[j], r), items).output == canon[i];
      if (equivalent) pairs.emplace(static_cast<int>(i) + 1, static_cast<int>(j) + 1);
    }
  }
  rep.redundant_pairs.assign(pairs.begin(), pairs.end());

#ifdef _OPENMP
#pragma omp parallel
  {
    Tally local;
    local.item_hits.assign(items.size() + 1, 0);
#pragma omp for schedule(static) nowait
    for (long k = 0; k < static_cast<long>(samples); ++k)
      run_sample(mv, items, reflections, seed, static_cast<std::size_t>(k), local);
#pragma omp critical(lieclass_optsys_merge)
    merge(rep, local);
  }
#else
  Tally local;
  local.item_hits.assign(items.size() + 1, 0);
  for (std::size_t k = 0; k < samples; ++k) run_sample(mv, items, reflections, seed, k, local);
  merge(rep, local);
#endif

  if (rep.with_residue > 0)
    rep.notes.push_back(
        "some coordinates cannot be normalized: the ratios listed under invariants are "
        "constant along every adjoint flow");
  if (rep.unmatched > 0)
    rep.notes.push_back("some reduced forms have a support no listed representative covers");
  if (!rep.redundant_pairs.empty())
    rep.notes.push_back("listed representatives merge under the reflection group");
  return rep;
}

}  // namespace lieclass
