#include "lieclass/expr.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <optional>
#include <sstream>

namespace lieclass {
namespace {

// ---------------------------------------------------------------------------
// term/monomial ordering

// Graded lexicographic monomial compare; smaller generator id = more
// significant. Returns +1 when a is the larger key.
int cmp_mono(const std::vector<std::pair<GenId, int>>& a,
             const std::vector<std::pair<GenId, int>>& b) {
  long da = 0, db = 0;
  for (const auto& p : a) da += p.second;
  for (const auto& p : b) db += p.second;
  if (da != db) return da > db ? 1 : -1;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i].first != b[i].first) return a[i].first < b[i].first ? 1 : -1;
    if (a[i].second != b[i].second) return a[i].second > b[i].second ? 1 : -1;
  }
  if (a.size() != b.size()) return a.size() > b.size() ? 1 : -1;
  return 0;
}

int cmp_poly(const Poly& a, const Poly& b);

int cmp_fraction_impl(const Fraction& a, const Fraction& b) {
  int c = cmp_poly(a.n, b.n);
  if (c) return c;
  return cmp_poly(a.d, b.d);
}

// Missing exponential part sorts largest, which makes the canonical
// denominator shift (below) a fixed point.
int cmp_earg(const FractionPtr& a, const FractionPtr& b) {
  if (!a && !b) return 0;
  if (!a) return 1;
  if (!b) return -1;
  return cmp_fraction_impl(*a, *b);
}

int cmp_term_key(const Term& a, const Term& b) {
  int c = cmp_mono(a.m, b.m);
  if (c) return c;
  return cmp_earg(a.e, b.e);
}

int cmp_term_full(const Term& a, const Term& b) {
  int c = cmp_term_key(a, b);
  if (c) return c;
  return ::cmp(a.c, b.c) > 0 ? 1 : (::cmp(a.c, b.c) < 0 ? -1 : 0);
}

int cmp_poly(const Poly& a, const Poly& b) {
  std::size_t n = std::min(a.ts.size(), b.ts.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = cmp_term_full(a.ts[i], b.ts[i]);
    if (c) return c;
  }
  if (a.ts.size() != b.ts.size()) return a.ts.size() > b.ts.size() ? 1 : -1;
  return 0;
}

// ---------------------------------------------------------------------------
// polynomial arithmetic

void canonicalize(Poly& p) {
  std::sort(p.ts.begin(), p.ts.end(), [](const Term& x, const Term& y) {
    return cmp_term_key(x, y) > 0;
  });
  std::vector<Term> out;
  out.reserve(p.ts.size());
  for (auto& t : p.ts) {
    if (t.c == 0) continue;
    if (!out.empty() && cmp_term_key(out.back(), t) == 0) {
      out.back().c += t.c;
      if (out.back().c == 0) out.pop_back();
    } else {
      out.push_back(std::move(t));
    }
  }
  p.ts = std::move(out);
}

Poly poly_const(const mpq_class& q) {
  Poly p;
  if (q != 0) p.ts.push_back(Term{q, {}, nullptr});
  return p;
}

Poly poly_one() { return poly_const(1); }

Poly poly_sym(GenId g) {
  Poly p;
  p.ts.push_back(Term{mpq_class(1), {{g, 1}}, nullptr});
  return p;
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly r;
  r.ts.reserve(a.ts.size() + b.ts.size());
  r.ts = a.ts;
  r.ts.insert(r.ts.end(), b.ts.begin(), b.ts.end());
  canonicalize(r);
  return r;
}

Poly poly_neg(const Poly& a) {
  Poly r = a;
  for (auto& t : r.ts) t.c = -t.c;
  return r;
}

Poly poly_sub(const Poly& a, const Poly& b) { return poly_add(a, poly_neg(b)); }

Poly poly_scale(const Poly& a, const mpq_class& q) {
  if (q == 0) return {};
  Poly r = a;
  for (auto& t : r.ts) t.c *= q;
  return r;
}

std::vector<std::pair<GenId, int>> mono_mul(const std::vector<std::pair<GenId, int>>& a,
                                            const std::vector<std::pair<GenId, int>>& b) {
  std::vector<std::pair<GenId, int>> r;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      r.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      r.push_back(b[j++]);
    } else {
      int k = a[i].second + b[j].second;
      if (k != 0) r.emplace_back(a[i].first, k);
      ++i;
      ++j;
    }
  }
  return r;
}

bool mono_divides(const std::vector<std::pair<GenId, int>>& d,
                  const std::vector<std::pair<GenId, int>>& m) {
  std::size_t j = 0;
  for (const auto& p : d) {
    while (j < m.size() && m[j].first < p.first) ++j;
    if (j == m.size() || m[j].first != p.first || m[j].second < p.second) return false;
  }
  return true;
}

std::vector<std::pair<GenId, int>> mono_div(const std::vector<std::pair<GenId, int>>& m,
                                            const std::vector<std::pair<GenId, int>>& d) {
  std::vector<std::pair<GenId, int>> r;
  std::size_t j = 0;
  for (const auto& p : m) {
    int k = p.second;
    while (j < d.size() && d[j].first < p.first) ++j;
    if (j < d.size() && d[j].first == p.first) k -= d[j].second;
    if (k != 0) r.emplace_back(p.first, k);
  }
  return r;
}

FractionPtr make_fraction(Poly n, Poly d);
Fraction frac_add(const Fraction& a, const Fraction& b);
Fraction frac_scale(const Fraction& a, const mpq_class& q);

// Adds exponential arguments; nullptr encodes zero.
FractionPtr earg_add(const FractionPtr& a, const FractionPtr& b) {
  if (!a) return b;
  if (!b) return a;
  Fraction s = frac_add(*a, *b);
  if (s.n.zero()) return nullptr;
  return std::make_shared<const Fraction>(std::move(s));
}

FractionPtr earg_scale(const FractionPtr& a, const mpq_class& q) {
  if (!a || q == 0) return nullptr;
  if (q == 1) return a;
  return std::make_shared<const Fraction>(frac_scale(*a, q));
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r;
  r.ts.reserve(a.ts.size() * b.ts.size());
  for (const auto& ta : a.ts)
    for (const auto& tb : b.ts)
      r.ts.push_back(Term{ta.c * tb.c, mono_mul(ta.m, tb.m), earg_add(ta.e, tb.e)});
  canonicalize(r);
  return r;
}

Poly poly_pow(const Poly& a, long k) {
  assert(k >= 0);
  Poly r = poly_one();
  Poly base = a;
  while (k > 0) {
    if (k & 1) r = poly_mul(r, base);
    base = (k >>= 1) ? poly_mul(base, base) : base;
  }
  return r;
}

// Multiplies every term's exponential part by exp(*shift); used to move the
// denominator's leading exponential to zero.
Poly poly_eshift(const Poly& p, const FractionPtr& shift) {
  if (!shift) return p;
  Poly r = p;
  for (auto& t : r.ts) t.e = earg_add(t.e, shift);
  canonicalize(r);
  return r;
}

// ---------------------------------------------------------------------------
// gcd machinery. Exponential parts are mapped to synthetic generators first,
// so the reduction is a best-effort one over the free extension; correctness
// of zero tests never depends on it.

constexpr GenId kSynBase = 0x80000000u;

struct SynTable {
  std::vector<FractionPtr> args;
  GenId id_for(const FractionPtr& f) {
    for (std::size_t i = 0; i < args.size(); ++i)
      if (cmp_fraction_impl(*args[i], *f) == 0) return kSynBase + static_cast<GenId>(i);
    args.push_back(f);
    return kSynBase + static_cast<GenId>(args.size() - 1);
  }
};

Poly syn_map(const Poly& p, SynTable& tab) {
  Poly r;
  r.ts.reserve(p.ts.size());
  for (const auto& t : p.ts) {
    Term nt{t.c, t.m, nullptr};
    if (t.e) nt.m = mono_mul(nt.m, {{tab.id_for(t.e), 1}});
    r.ts.push_back(std::move(nt));
  }
  canonicalize(r);
  return r;
}

Poly syn_unmap(const Poly& p, const SynTable& tab) {
  Poly r;
  r.ts.reserve(p.ts.size());
  for (const auto& t : p.ts) {
    Term nt{t.c, {}, nullptr};
    FractionPtr e;
    for (const auto& pr : t.m) {
      if (pr.first >= kSynBase) {
        e = earg_add(e, earg_scale(tab.args[pr.first - kSynBase], pr.second));
      } else {
        nt.m.push_back(pr);
      }
    }
    nt.e = e;
    r.ts.push_back(std::move(nt));
  }
  canonicalize(r);
  return r;
}

void poly_vars_into(const Poly& p, std::set<GenId>& out) {
  for (const auto& t : p.ts)
    for (const auto& pr : t.m) out.insert(pr.first);
}

int deg_v(const Poly& p, GenId v) {
  int d = 0;
  for (const auto& t : p.ts)
    for (const auto& pr : t.m)
      if (pr.first == v) d = std::max(d, pr.second);
  return d;
}

Poly coeff_of(const Poly& p, GenId v, int k) {
  Poly r;
  for (const auto& t : p.ts) {
    int e = 0;
    for (const auto& pr : t.m)
      if (pr.first == v) e = pr.second;
    if (e != k) continue;
    Term nt = t;
    if (k != 0) nt.m = mono_div(nt.m, {{v, k}});
    r.ts.push_back(std::move(nt));
  }
  canonicalize(r);
  return r;
}

// Exact multivariate division; nullopt when b does not divide a.
std::optional<Poly> poly_divexact(const Poly& a, const Poly& b) {
  assert(!b.zero());
  Poly rem = a;
  Poly q;
  const Term& lb = b.ts.front();
  int guard = 0;
  while (!rem.zero()) {
    if (++guard > 100000) return std::nullopt;
    const Term& lr = rem.ts.front();
    if (lr.e || lb.e) return std::nullopt;  // gcd path is exponential-free
    if (!mono_divides(lb.m, lr.m)) return std::nullopt;
    Term qt{lr.c / lb.c, mono_div(lr.m, lb.m), nullptr};
    Poly qp;
    qp.ts.push_back(qt);
    q = poly_add(q, qp);
    rem = poly_sub(rem, poly_mul(qp, b));
  }
  return q;
}

mpz_class int_content(const Poly& p, mpz_class* lden) {
  mpz_class L = 1;
  for (const auto& t : p.ts) L = lcm(L, t.c.get_den());
  mpz_class G = 0;
  for (const auto& t : p.ts) {
    mpz_class scaled = t.c.get_num() * (L / t.c.get_den());
    G = gcd(G, scaled);
  }
  if (lden) *lden = L;
  return G;
}

// Scales to a primitive integer polynomial with positive leading coefficient.
Poly primitive_int(const Poly& p) {
  if (p.zero()) return p;
  mpz_class L;
  mpz_class G = int_content(p, &L);
  mpq_class factor(L, G);
  factor.canonicalize();
  Poly r = poly_scale(p, factor);
  if (r.ts.front().c < 0) r = poly_neg(r);
  return r;
}

Poly igcd(const Poly& A, const Poly& B);

Poly content_wrt(const Poly& p, GenId v) {
  Poly c;
  int d = deg_v(p, v);
  for (int k = 0; k <= d; ++k) {
    Poly ck = coeff_of(p, v, k);
    if (!ck.zero()) c = igcd(c, ck);
  }
  return c;
}

Poly prem(const Poly& A, const Poly& B, GenId v) {
  int db = deg_v(B, v);
  Poly lb = coeff_of(B, v, db);
  Poly R = A;
  while (!R.zero() && deg_v(R, v) >= db) {
    int dr = deg_v(R, v);
    Poly lr = coeff_of(R, v, dr);
    Poly shift;
    shift.ts.push_back(Term{mpq_class(1), {{v, dr - db}}, nullptr});
    if (dr == db) shift = poly_one();
    R = poly_sub(poly_mul(lb, R), poly_mul(poly_mul(lr, shift), B));
  }
  return R;
}

Poly igcd(const Poly& A, const Poly& B) {
  if (A.zero()) return primitive_int(B);
  if (B.zero()) return primitive_int(A);
  std::set<GenId> vars;
  poly_vars_into(A, vars);
  poly_vars_into(B, vars);
  if (vars.empty()) {
    mpz_class g = gcd(A.ts.front().c.get_num(), B.ts.front().c.get_num());
    return poly_const(mpq_class(abs(g)));
  }
  GenId v = *vars.begin();
  Poly ca = content_wrt(A, v);
  Poly cb = content_wrt(B, v);
  Poly cont = igcd(ca, cb);
  auto pa_opt = poly_divexact(A, ca);
  auto pb_opt = poly_divexact(B, cb);
  assert(pa_opt && pb_opt);
  Poly pa = *pa_opt, pb = *pb_opt;
  if (deg_v(pa, v) < deg_v(pb, v)) std::swap(pa, pb);
  int guard = 0;
  while (!pb.zero()) {
    if (++guard > 200) return poly_one();  // give up on reduction, never on correctness
    Poly r = prem(pa, pb, v);
    pa = pb;
    if (r.zero()) {
      pb = r;
    } else {
      Poly cr = content_wrt(r, v);
      auto pr = poly_divexact(r, cr);
      assert(pr);
      pb = *pr;
    }
    if (deg_v(pa, v) == 0 && !pb.zero()) {
      // coprime in v; only the content survives
      return cont;
    }
  }
  Poly g = pa;
  Poly cg = content_wrt(g, v);
  auto pg = poly_divexact(g, cg);
  assert(pg);
  return primitive_int(poly_mul(cont, *pg));
}

bool is_const_poly(const Poly& p) {
  return p.zero() || (p.ts.size() == 1 && p.ts.front().m.empty() && !p.ts.front().e);
}

void reduce_pair(Poly& n, Poly& d) {
  SynTable tab;
  Poly ns = syn_map(n, tab);
  Poly ds = syn_map(d, tab);
  Poly nz = primitive_int(ns);
  Poly dz = primitive_int(ds);
  Poly g = igcd(nz, dz);
  if (is_const_poly(g)) return;
  auto nq = poly_divexact(nz, g);
  auto dq = poly_divexact(dz, g);
  if (!nq || !dq) return;
  // restore the dropped rational contents so the overall value is unchanged
  mpz_class Ln, Lds;
  mpz_class Gn = int_content(ns, &Ln);
  mpz_class Gd = int_content(ds, &Lds);
  mpq_class fn(Gn, Ln), fd(Gd, Lds);
  fn.canonicalize();
  fd.canonicalize();
  if (ns.ts.front().c < 0) fn = -fn;
  if (ds.ts.front().c < 0) fd = -fd;
  n = syn_unmap(poly_scale(*nq, fn), tab);
  d = syn_unmap(poly_scale(*dq, fd), tab);
}

// Canonical form: gcd-reduced, denominator leading coefficient one, leading
// exponential part zero.
FractionPtr make_fraction(Poly n, Poly d) {
  canonicalize(n);
  canonicalize(d);
  if (d.zero()) throw DegenerateDivision();
  if (n.zero()) {
    auto f = std::make_shared<Fraction>();
    f->d = poly_one();
    return f;
  }
  if (!is_const_poly(d)) reduce_pair(n, d);
  const Term& lead = d.ts.front();
  if (lead.c != 1) {
    mpq_class inv = 1 / lead.c;
    n = poly_scale(n, inv);
    d = poly_scale(d, inv);
  }
  if (d.ts.front().e) {
    FractionPtr shift = earg_scale(d.ts.front().e, -1);
    n = poly_eshift(n, shift);
    d = poly_eshift(d, shift);
  }
  auto f = std::make_shared<Fraction>();
  f->n = std::move(n);
  f->d = std::move(d);
  return f;
}

Fraction frac_add(const Fraction& a, const Fraction& b) {
  return *make_fraction(poly_add(poly_mul(a.n, b.d), poly_mul(b.n, a.d)), poly_mul(a.d, b.d));
}

Fraction frac_sub(const Fraction& a, const Fraction& b) {
  return *make_fraction(poly_sub(poly_mul(a.n, b.d), poly_mul(b.n, a.d)), poly_mul(a.d, b.d));
}

Fraction frac_mul(const Fraction& a, const Fraction& b) {
  return *make_fraction(poly_mul(a.n, b.n), poly_mul(a.d, b.d));
}

Fraction frac_div(const Fraction& a, const Fraction& b) {
  if (b.n.zero()) throw DegenerateDivision();
  return *make_fraction(poly_mul(a.n, b.d), poly_mul(a.d, b.n));
}

Fraction frac_scale(const Fraction& a, const mpq_class& q) {
  return *make_fraction(poly_scale(a.n, q), a.d);
}

Fraction frac_pow(const Fraction& a, long k) {
  if (k == 0) return *make_fraction(poly_one(), poly_one());
  if (k > 0) return *make_fraction(poly_pow(a.n, k), poly_pow(a.d, k));
  if (a.n.zero()) throw DegenerateDivision();
  return *make_fraction(poly_pow(a.d, -k), poly_pow(a.n, -k));
}

Fraction frac_const(const mpq_class& q) { return *make_fraction(poly_const(q), poly_one()); }

Fraction frac_sym(GenId g) { return *make_fraction(poly_sym(g), poly_one()); }

Fraction frac_exp(const Fraction& arg) {
  if (arg.n.zero()) return frac_const(1);
  Poly p;
  p.ts.push_back(Term{mpq_class(1), {}, std::make_shared<const Fraction>(arg)});
  return *make_fraction(std::move(p), poly_one());
}

// ---------------------------------------------------------------------------
// generator support / mentions

void frac_support(const Fraction& f, const Chart& ch, std::set<GenId>& out);

void poly_support(const Poly& p, const Chart& ch, std::set<GenId>& out) {
  for (const auto& t : p.ts) {
    for (const auto& pr : t.m) {
      out.insert(pr.first);
      const Generator& g = ch.gen(pr.first);
      if (g.is_atom)
        for (const auto& a : g.atom.args) frac_support(*a, ch, out);
    }
    if (t.e) frac_support(*t.e, ch, out);
  }
}

void frac_support(const Fraction& f, const Chart& ch, std::set<GenId>& out) {
  poly_support(f.n, ch, out);
  poly_support(f.d, ch, out);
}

// ---------------------------------------------------------------------------
// differentiation

Fraction frac_diff(const Fraction& f, GenId v, Chart& ch);

// d(generator)/dv as a fraction; chains through atom arguments.
Fraction gen_diff(GenId g, GenId v, Chart& ch) {
  if (g == v) return frac_const(1);
  const Generator& gen = ch.gen(g);
  if (!gen.is_atom) return frac_const(0);
  Fraction acc = frac_const(0);
  for (std::size_t j = 0; j < gen.atom.args.size(); ++j) {
    Fraction da = frac_diff(*gen.atom.args[j], v, ch);
    if (da.n.zero()) continue;
    std::vector<int> dm = gen.atom.dmulti;
    dm.push_back(static_cast<int>(j));
    GenId deriv = ch.intern_atom(gen.atom.func, std::move(dm), gen.atom.args);
    acc = frac_add(acc, frac_mul(frac_sym(deriv), da));
  }
  return acc;
}

Fraction poly_diff(const Poly& p, GenId v, Chart& ch) {
  Fraction acc = frac_const(0);
  for (const auto& t : p.ts) {
    for (std::size_t i = 0; i < t.m.size(); ++i) {
      Fraction dg = gen_diff(t.m[i].first, v, ch);
      if (dg.n.zero()) continue;
      Term base = t;
      base.c *= t.m[i].second;
      base.m = mono_div(base.m, {{t.m[i].first, 1}});
      Poly bp;
      bp.ts.push_back(std::move(base));
      acc = frac_add(acc, frac_mul(*make_fraction(bp, poly_one()), dg));
    }
    if (t.e) {
      Fraction ds = frac_diff(*t.e, v, ch);
      if (!ds.n.zero()) {
        Poly bp;
        bp.ts.push_back(t);
        acc = frac_add(acc, frac_mul(*make_fraction(bp, poly_one()), ds));
      }
    }
  }
  return acc;
}

Fraction frac_diff(const Fraction& f, GenId v, Chart& ch) {
  Fraction dn = poly_diff(f.n, v, ch);
  Fraction dd = poly_diff(f.d, v, ch);
  if (dd.n.zero()) {
    return frac_div(dn, Fraction{f.d, poly_one()});
  }
  Fraction num = frac_sub(frac_mul(dn, Fraction{f.d, poly_one()}),
                          frac_mul(Fraction{f.n, poly_one()}, dd));
  return frac_div(num, Fraction{poly_mul(f.d, f.d), poly_one()});
}

// ---------------------------------------------------------------------------
// substitution

Fraction frac_subst(const Fraction& f, const std::map<GenId, Fraction>& rules, Chart& ch);

Fraction gen_image(GenId g, const std::map<GenId, Fraction>& rules, Chart& ch) {
  auto it = rules.find(g);
  if (it != rules.end()) return it->second;
  const Generator& gen = ch.gen(g);
  if (!gen.is_atom) return frac_sym(g);
  bool changed = false;
  std::vector<FractionPtr> nargs;
  nargs.reserve(gen.atom.args.size());
  for (const auto& a : gen.atom.args) {
    Fraction na = frac_subst(*a, rules, ch);
    if (cmp_fraction_impl(na, *a) != 0) changed = true;
    nargs.push_back(std::make_shared<const Fraction>(std::move(na)));
  }
  if (!changed) return frac_sym(g);
  GenId ng = ch.intern_atom(gen.atom.func, gen.atom.dmulti, std::move(nargs));
  return frac_sym(ng);
}

Fraction poly_subst(const Poly& p, const std::map<GenId, Fraction>& rules, Chart& ch) {
  Fraction acc = frac_const(0);
  for (const auto& t : p.ts) {
    Fraction prod = frac_const(t.c);
    for (const auto& pr : t.m)
      prod = frac_mul(prod, frac_pow(gen_image(pr.first, rules, ch), pr.second));
    if (t.e) prod = frac_mul(prod, frac_exp(frac_subst(*t.e, rules, ch)));
    acc = frac_add(acc, prod);
  }
  return acc;
}

Fraction frac_subst(const Fraction& f, const std::map<GenId, Fraction>& rules, Chart& ch) {
  Fraction n = poly_subst(f.n, rules, ch);
  Fraction d = poly_subst(f.d, rules, ch);
  return frac_div(n, d);
}

// ---------------------------------------------------------------------------
// evaluation

mpq_class frac_eval_exact(const Fraction& f, const std::map<GenId, mpq_class>& pt, const Chart& ch);

mpq_class poly_eval_exact(const Poly& p, const std::map<GenId, mpq_class>& pt, const Chart& ch) {
  mpq_class acc = 0;
  for (const auto& t : p.ts) {
    mpq_class v = t.c;
    for (const auto& pr : t.m) {
      auto it = pt.find(pr.first);
      if (it == pt.end()) throw std::domain_error("unbound generator in exact evaluation");
      mpq_class base = it->second;
      int k = pr.second;
      if (k < 0) {
        if (base == 0) throw std::domain_error("evaluation at a pole");
        base = 1 / base;
        k = -k;
      }
      for (int i = 0; i < k; ++i) v *= base;
    }
    if (t.e) {
      mpq_class s = frac_eval_exact(*t.e, pt, ch);
      if (s != 0) throw std::domain_error("exponential at nonzero argument in exact evaluation");
    }
    acc += v;
  }
  return acc;
}

mpq_class frac_eval_exact(const Fraction& f, const std::map<GenId, mpq_class>& pt, const Chart& ch) {
  mpq_class d = poly_eval_exact(f.d, pt, ch);
  if (d == 0) throw std::domain_error("evaluation at a pole");
  return poly_eval_exact(f.n, pt, ch) / d;
}

double frac_eval_double(const Fraction& f, const std::map<GenId, mpq_class>& pt, const Chart& ch);

double poly_eval_double(const Poly& p, const std::map<GenId, mpq_class>& pt, const Chart& ch) {
  double acc = 0;
  for (const auto& t : p.ts) {
    double v = t.c.get_d();
    for (const auto& pr : t.m) {
      auto it = pt.find(pr.first);
      if (it == pt.end()) throw std::domain_error("unbound generator in evaluation");
      v *= std::pow(it->second.get_d(), pr.second);
    }
    if (t.e) v *= std::exp(frac_eval_double(*t.e, pt, ch));
    acc += v;
  }
  return acc;
}

double frac_eval_double(const Fraction& f, const std::map<GenId, mpq_class>& pt, const Chart& ch) {
  double d = poly_eval_double(f.d, pt, ch);
  if (std::abs(d) < 1e-300) throw std::domain_error("evaluation at a pole");
  return poly_eval_double(f.n, pt, ch) / d;
}

// ---------------------------------------------------------------------------
// rendering

std::string term_str(const Term& t, const Chart& ch, bool lead);
std::string poly_str(const Poly& p, const Chart& ch);

std::string atom_str(const Generator& g, const Chart& ch) {
  const FunctionDecl& fd = ch.function(g.atom.func);
  std::string s = fd.name;
  if (!g.atom.dmulti.empty()) {
    s += "[";
    for (std::size_t i = 0; i < g.atom.dmulti.size(); ++i) {
      if (i) s += ",";
      s += fd.formals[g.atom.dmulti[i]];
    }
    s += "]";
  }
  bool all_default = true;
  for (std::size_t i = 0; i < g.atom.args.size(); ++i) {
    GenId fs = fd.formal_syms[i];
    const Fraction& a = *g.atom.args[i];
    bool is_default = fs != kNoGen && a.d.ts.size() == 1 && is_const_poly(a.d) &&
                      a.d.ts.front().c == 1 && a.n.ts.size() == 1 && !a.n.ts.front().e &&
                      a.n.ts.front().c == 1 && a.n.ts.front().m.size() == 1 &&
                      a.n.ts.front().m.front() == std::make_pair(fs, 1);
    if (!is_default) all_default = false;
  }
  if (!all_default) {
    s += "(";
    for (std::size_t i = 0; i < g.atom.args.size(); ++i) {
      if (i) s += ", ";
      s += to_string(*g.atom.args[i], ch);
    }
    s += ")";
  }
  return s;
}

std::string factor_str(GenId g, int k, const Chart& ch) {
  const Generator& gen = ch.gen(g);
  std::string base = gen.is_atom ? atom_str(gen, ch) : gen.sym.name;
  if (k == 1) return base;
  return base + "^" + std::to_string(k);
}

std::string term_str(const Term& t, const Chart& ch, bool lead) {
  mpq_class c = t.c;
  std::string sign;
  if (c < 0) {
    sign = lead ? "-" : " - ";
    c = -c;
  } else {
    sign = lead ? "" : " + ";
  }
  std::vector<std::string> factors;
  if (c != 1 || (t.m.empty() && !t.e)) factors.push_back(c.get_str());
  for (const auto& pr : t.m) factors.push_back(factor_str(pr.first, pr.second, ch));
  if (t.e) factors.push_back("exp(" + to_string(*t.e, ch) + ")");
  std::string body;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i) body += "*";
    body += factors[i];
  }
  return sign + body;
}

std::string poly_str(const Poly& p, const Chart& ch) {
  if (p.zero()) return "0";
  std::string s;
  for (std::size_t i = 0; i < p.ts.size(); ++i) s += term_str(p.ts[i], ch, i == 0);
  return s;
}

bool poly_is_simple_factor(const Poly& p) {
  if (p.ts.size() != 1) return false;
  const Term& t = p.ts.front();
  int nf = (t.c != 1 ? 1 : 0) + static_cast<int>(t.m.size()) + (t.e ? 1 : 0);
  if (t.c == 1 && t.m.size() == 1 && !t.e && t.m.front().second == 1) return true;
  return nf <= 1;
}

}  // namespace

int compare(const Fraction& a, const Fraction& b) { return cmp_fraction_impl(a, b); }

std::string to_string(const Fraction& f, const Chart& ch) {
  bool den_one = is_const_poly(f.d) && !f.d.zero() && f.d.ts.front().c == 1;
  if (den_one) return poly_str(f.n, ch);
  std::string ns = poly_str(f.n, ch);
  std::string ds = poly_str(f.d, ch);
  if (f.n.ts.size() > 1) ns = "(" + ns + ")";
  if (!poly_is_simple_factor(f.d)) ds = "(" + ds + ")";
  return ns + "/" + ds;
}

// ---------------------------------------------------------------------------
// Expression wrappers

Expression Expression::constant(Chart& c, const mpq_class& q) {
  return Expression(&c, std::make_shared<const Fraction>(frac_const(q)));
}

Expression Expression::integer(Chart& c, long v) { return constant(c, mpq_class(v)); }

Expression Expression::sym(Chart& c, GenId id) {
  assert(id < c.size());
  return Expression(&c, std::make_shared<const Fraction>(frac_sym(id)));
}

Expression Expression::sym(Chart& c, const std::string& name) { return sym(c, c.require(name)); }

Expression Expression::exp(const Expression& arg) {
  return Expression(&arg.chart(), std::make_shared<const Fraction>(frac_exp(arg.fraction())));
}

Expression Expression::call(Chart& c, const std::string& func, const std::vector<Expression>& args) {
  std::uint32_t fid = c.function_id(func);
  return atom(c, fid, {}, args);
}

Expression Expression::atom(Chart& c, std::uint32_t func, std::vector<int> dmulti,
                            const std::vector<Expression>& args) {
  const FunctionDecl& fd = c.function(func);
  if (args.size() != fd.formals.size())
    throw std::invalid_argument("function " + fd.name + " expects " +
                                std::to_string(fd.formals.size()) + " arguments, got " +
                                std::to_string(args.size()));
  std::vector<FractionPtr> fargs;
  fargs.reserve(args.size());
  for (const auto& a : args) fargs.push_back(a.share());
  GenId id = c.intern_atom(func, std::move(dmulti), std::move(fargs));
  return sym(c, id);
}

Expression Expression::from_fraction(Chart& c, FractionPtr f) {
  return Expression(&c, std::move(f));
}

bool Expression::is_zero() const { return f_->n.zero(); }

bool Expression::is_rational() const {
  return is_const_poly(f_->n) && is_const_poly(f_->d);
}

mpq_class Expression::rational_value() const {
  assert(is_rational());
  if (f_->n.zero()) return 0;
  return f_->n.ts.front().c / f_->d.ts.front().c;
}

bool Expression::same(const Expression& o) const {
  assert(chart_ == o.chart_);
  return (*this - o).is_zero();
}

Expression Expression::operator-() const {
  return Expression(chart_, std::make_shared<const Fraction>(
                                Fraction{poly_neg(f_->n), f_->d}));
}

Expression Expression::pow(long k) const {
  return Expression(chart_, std::make_shared<const Fraction>(frac_pow(*f_, k)));
}

Expression Expression::diff(GenId v) const {
  return Expression(chart_, std::make_shared<const Fraction>(frac_diff(*f_, v, *chart_)));
}

Expression Expression::diff(const std::string& v) const { return diff(chart_->require(v)); }

Expression Expression::substitute(
    const std::vector<std::pair<Expression, Expression>>& rules) const {
  std::map<GenId, Fraction> m;
  for (const auto& r : rules) {
    const Fraction& key = r.first.fraction();
    if (!(key.n.ts.size() == 1 && is_const_poly(key.d) && key.d.ts.front().c == 1 &&
          key.n.ts.front().c == 1 && !key.n.ts.front().e && key.n.ts.front().m.size() == 1 &&
          key.n.ts.front().m.front().second == 1))
      throw std::invalid_argument("substitution key must be a single symbol or atom");
    GenId g = key.n.ts.front().m.front().first;
    if (r.second.mentions(g)) throw CyclicSubstitution(chart_->name(g));
    m.emplace(g, r.second.fraction());
  }
  return Expression(chart_, std::make_shared<const Fraction>(frac_subst(*f_, m, *chart_)));
}

bool Expression::mentions(GenId g) const {
  std::set<GenId> s;
  frac_support(*f_, *chart_, s);
  return s.count(g) != 0;
}

std::set<GenId> Expression::generator_support() const {
  std::set<GenId> s;
  frac_support(*f_, *chart_, s);
  return s;
}

std::vector<std::pair<std::vector<std::pair<GenId, int>>, Expression>> Expression::split_by(
    const std::vector<GenId>& markers) const {
  std::set<GenId> mset(markers.begin(), markers.end());
  auto touches = [&](const Fraction& f) {
    std::set<GenId> s;
    frac_support(f, *chart_, s);
    for (GenId m : mset)
      if (s.count(m)) return true;
    return false;
  };
  for (const auto& t : f_->d.ts) {
    for (const auto& pr : t.m)
      if (mset.count(pr.first))
        throw NotPolynomial("marker " + chart_->name(pr.first) + " occurs in a denominator");
    if (t.e && touches(*t.e))
      throw NotPolynomial("marker occurs inside an exponential in a denominator");
  }
  // key: marker sub-monomial; value: accumulated coefficient polynomial
  std::vector<std::pair<std::vector<std::pair<GenId, int>>, Poly>> groups;
  for (const auto& t : f_->n.ts) {
    std::vector<std::pair<GenId, int>> part, rest;
    for (const auto& pr : t.m) {
      const Generator& g = chart_->gen(pr.first);
      if (mset.count(pr.first)) {
        part.push_back(pr);
        continue;
      }
      if (g.is_atom) {
        for (const auto& a : g.atom.args)
          if (touches(*a))
            throw NotPolynomial("marker occurs inside an unknown-function argument");
      }
      rest.push_back(pr);
    }
    if (t.e && touches(*t.e)) throw NotPolynomial("marker occurs inside an exponential");
    Term rt{t.c, std::move(rest), t.e};
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto& g) { return cmp_mono(g.first, part) == 0; });
    if (it == groups.end()) {
      groups.emplace_back(std::move(part), Poly{});
      it = std::prev(groups.end());
    }
    it->second.ts.push_back(std::move(rt));
  }
  std::sort(groups.begin(), groups.end(),
            [](const auto& a, const auto& b) { return cmp_mono(a.first, b.first) > 0; });
  std::vector<std::pair<std::vector<std::pair<GenId, int>>, Expression>> out;
  for (auto& g : groups) {
    canonicalize(g.second);
    if (g.second.zero()) continue;
    Poly den = f_->d;
    out.emplace_back(g.first,
                     Expression::from_fraction(*chart_, make_fraction(std::move(g.second), den)));
  }
  return out;
}

mpq_class Expression::eval_exact(const std::map<GenId, mpq_class>& point) const {
  return frac_eval_exact(*f_, point, *chart_);
}

double Expression::eval_double(const std::map<GenId, mpq_class>& point) const {
  return frac_eval_double(*f_, point, *chart_);
}

std::string Expression::str() const { return to_string(*f_, *chart_); }

Expression operator+(const Expression& a, const Expression& b) {
  assert(&a.chart() == &b.chart());
  return Expression::from_fraction(a.chart(),
                                   std::make_shared<const Fraction>(frac_add(a.fraction(), b.fraction())));
}

Expression operator-(const Expression& a, const Expression& b) {
  assert(&a.chart() == &b.chart());
  return Expression::from_fraction(a.chart(),
                                   std::make_shared<const Fraction>(frac_sub(a.fraction(), b.fraction())));
}

Expression operator*(const Expression& a, const Expression& b) {
  assert(&a.chart() == &b.chart());
  return Expression::from_fraction(a.chart(),
                                   std::make_shared<const Fraction>(frac_mul(a.fraction(), b.fraction())));
}

Expression operator/(const Expression& a, const Expression& b) {
  assert(&a.chart() == &b.chart());
  return Expression::from_fraction(a.chart(),
                                   std::make_shared<const Fraction>(frac_div(a.fraction(), b.fraction())));
}

Expression normalize(const Expression& e) {
  Poly n = e.fraction().n;
  Poly d = e.fraction().d;
  return Expression::from_fraction(e.chart(), make_fraction(std::move(n), std::move(d)));
}

std::vector<std::pair<Expression, Expression>> collect(const Expression& e,
                                                       const std::vector<Expression>& markers) {
  Chart& ch = e.chart();
  std::vector<std::vector<std::pair<GenId, int>>> keys;
  std::set<GenId> support;
  for (const auto& m : markers) {
    const Fraction& f = m.fraction();
    if (!(f.n.ts.size() == 1 && is_const_poly(f.d) && f.d.ts.front().c == 1 &&
          f.n.ts.front().c == 1 && !f.n.ts.front().e))
      throw std::invalid_argument("collect markers must be monomials");
    keys.push_back(f.n.ts.front().m);
    for (const auto& pr : keys.back()) support.insert(pr.first);
  }
  auto rows = e.split_by(std::vector<GenId>(support.begin(), support.end()));
  std::vector<std::pair<Expression, Expression>> out;
  Expression remainder;
  for (const auto& row : rows) {
    if (row.first.empty()) {
      remainder = row.second;
      continue;
    }
    bool found = false;
    for (std::size_t i = 0; i < keys.size() && !found; ++i) {
      if (cmp_mono(keys[i], row.first) == 0) {
        out.emplace_back(markers[i], row.second);
        found = true;
      }
    }
    if (!found) {
      std::string mono;
      for (const auto& pr : row.first) {
        if (!mono.empty()) mono += "*";
        mono += ch.name(pr.first);
        if (pr.second > 1) mono += "^" + std::to_string(pr.second);
      }
      throw NotPolynomial("monomial " + mono + " is not in the marker set");
    }
  }
  // deterministic order: marker list order, remainder last
  std::vector<std::pair<Expression, Expression>> ordered;
  for (const auto& m : markers)
    for (auto& p : out)
      if (p.first.same(m)) ordered.push_back(p);
  if (remainder.valid() && !remainder.is_zero())
    ordered.emplace_back(Expression::integer(ch, 1), remainder);
  return ordered;
}

}  // namespace lieclass
