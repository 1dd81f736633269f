#include "lieclass/liealg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <set>

#include "lieclass/parser.hpp"

namespace lieclass {

namespace {

using QMat = std::vector<std::vector<mpq_class>>;
using QVec = std::vector<mpq_class>;

mpq_class qpow(const mpq_class& b, long e) {
  mpq_class r = 1, a = b;
  for (long k = e; k > 0; k >>= 1) {
    if (k & 1) r *= a;
    a *= a;
  }
  return r;
}

mpq_class factorial(long n) {
  mpq_class r = 1;
  for (long k = 2; k <= n; ++k) r *= k;
  return r;
}

// --- exact linear rows over coordinate/term keys ---------------------------

struct RowKey {
  GenId g = kNoGen;
  std::vector<std::pair<GenId, int>> mono;
  FractionPtr earg;
};

struct RowKeyLess {
  bool operator()(const RowKey& a, const RowKey& b) const {
    if (a.g != b.g) return a.g < b.g;
    if (a.mono != b.mono) return a.mono < b.mono;
    if (!a.earg || !b.earg) return bool(a.earg) < bool(b.earg);
    return compare(*a.earg, *b.earg) < 0;
  }
};

using RowMap = std::map<RowKey, QVec, RowKeyLess>;

// Adds the terms of the polynomial component `e` at coordinate g to column
// `col` of the row system. Components must have trivial denominators.
void add_rows(RowMap& rows, GenId g, const Expression& e, std::size_t col, std::size_t width) {
  const Fraction& f = e.fraction();
  bool unit = f.d.ts.size() == 1 && f.d.ts.front().m.empty() && !f.d.ts.front().e &&
              f.d.ts.front().c == 1;
  if (!unit) throw std::invalid_argument("structure constants need polynomial components");
  for (const Term& t : f.n.ts) {
    RowKey k{g, t.m, t.e};
    auto it = rows.find(k);
    if (it == rows.end()) it = rows.emplace(k, QVec(width, 0)).first;
    it->second[col] += t.c;
  }
}

// Gaussian elimination; returns the solution of A x = b (columns 0..n-1 the
// matrix, column n the right side) or nullopt when inconsistent. Free
// variables are set to zero.
std::optional<QVec> solve_rows(std::vector<QVec> rows, std::size_t n) {
  std::size_t lead = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t col = 0; col < n && lead < rows.size(); ++col) {
    std::size_t p = lead;
    while (p < rows.size() && rows[p][col] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[lead]);
    mpq_class inv = rows[lead][col];
    for (auto& v : rows[lead]) v /= inv;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == lead || rows[r][col] == 0) continue;
      mpq_class m = rows[r][col];
      for (std::size_t c2 = 0; c2 <= n; ++c2) rows[r][c2] -= m * rows[lead][c2];
    }
    pivot_col.push_back(col);
    ++lead;
  }
  for (std::size_t r = lead; r < rows.size(); ++r)
    if (rows[r][n] != 0) return std::nullopt;
  QVec x(n, 0);
  for (std::size_t r = 0; r < pivot_col.size(); ++r) x[pivot_col[r]] = rows[r][n];
  return x;
}

std::size_t rank_rows(std::vector<QVec> rows, std::size_t n) {
  std::size_t lead = 0;
  for (std::size_t col = 0; col < n && lead < rows.size(); ++col) {
    std::size_t p = lead;
    while (p < rows.size() && rows[p][col] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[lead]);
    for (std::size_t r = lead + 1; r < rows.size(); ++r) {
      if (rows[r][col] == 0) continue;
      mpq_class m = rows[r][col] / rows[lead][col];
      for (std::size_t c2 = 0; c2 < n; ++c2) rows[r][c2] -= m * rows[lead][c2];
    }
    ++lead;
  }
  return lead;
}

// Coefficients of target in the span of the basis fields, or nullopt.
std::optional<QVec> span_solve(const std::vector<VectorField>& basis, const VectorField& target) {
  std::size_t n = basis.size();
  RowMap rows;
  for (std::size_t k = 0; k < n; ++k)
    for (const auto& [g, e] : basis[k].comps()) add_rows(rows, g, e, k, n + 1);
  for (const auto& [g, e] : target.comps()) add_rows(rows, g, e, n, n + 1);
  std::vector<QVec> mat;
  mat.reserve(rows.size());
  for (auto& [k, v] : rows) mat.push_back(std::move(v));
  return solve_rows(std::move(mat), n);
}

// --- integer spectrum -------------------------------------------------------

QVec charpoly(const QMat& M) {
  std::size_t n = M.size();
  QMat B = M;
  QVec c(n + 1, 0);
  c[0] = 1;  // c[k] = coefficient of lambda^{n-k}
  for (std::size_t k = 1; k <= n; ++k) {
    if (k > 1) {
      // B = M * (B + c[k-1] * I)
      QMat A = B;
      for (std::size_t i = 0; i < n; ++i) A[i][i] += c[k - 1];
      QMat nb(n, QVec(n, 0));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < n; ++l) {
          if (M[i][l] == 0) continue;
          for (std::size_t j = 0; j < n; ++j) nb[i][j] += M[i][l] * A[l][j];
        }
      B = std::move(nb);
    }
    mpq_class tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += B[i][i];
    c[k] = -tr / (long)k;
  }
  return c;  // monic, highest power first
}

mpq_class poly_eval(const QVec& p, const mpq_class& x) {
  mpq_class r = 0;
  for (const auto& c : p) r = r * x + c;
  return r;
}

std::string poly_str(const QVec& p) {
  std::string s;
  long deg = (long)p.size() - 1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0 && deg - (long)i != deg) continue;
    if (!s.empty()) s += " + ";
    s += p[i].get_str() + "*L^" + std::to_string(deg - (long)i);
  }
  return s;
}

std::vector<long> integer_spectrum(const QMat& M) {
  QVec p = charpoly(M);
  std::vector<long> eigs;
  while (p.size() > 1) {
    std::optional<long> root;
    if (p.back() == 0) {
      root = 0;
    } else {
      // integer roots divide the constant term of the integerized polynomial
      mpz_class den = 1;
      for (const auto& c : p) den = lcm(den, c.get_den());
      mpz_class a0 = mpz_class(p.back() * den);
      if (a0 < 0) a0 = -a0;
      std::vector<long> cand;
      for (mpz_class d = 1; d * d <= a0; ++d)
        if (a0 % d == 0) {
          cand.push_back(d.get_si());
          cand.push_back(mpz_class(a0 / d).get_si());
        }
      std::sort(cand.begin(), cand.end());
      cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
      std::vector<long> ordered;
      for (long d : cand) {
        ordered.push_back(d);
        ordered.push_back(-d);
      }
      std::stable_sort(ordered.begin(), ordered.end(),
                       [](long a, long b) { return std::llabs(a) < std::llabs(b); });
      for (long d : ordered)
        if (poly_eval(p, d) == 0) {
          root = d;
          break;
        }
    }
    if (!root) throw NonIntegerSpectrum(poly_str(p));
    eigs.push_back(*root);
    // synthetic division by (L - root)
    QVec q(p.size() - 1);
    mpq_class carry = 0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      carry = p[i] + carry * *root;
      q[i] = carry;
    }
    p = std::move(q);
  }
  return eigs;
}

// Solution of y' = lam*y + prev with y(0) = 0.
PolyExp ode_step(const PolyExp& prev, long lam) {
  PolyExp y;
  for (const auto& [nm, q] : prev.terms()) {
    auto [n, mu] = nm;
    if (mu == lam) {
      y = y + PolyExp::term(q / (n + 1), n + 1, lam);
      continue;
    }
    mpq_class alpha = mu - lam;
    mpq_class sign = 1;
    for (long k = 0; k <= n; ++k) {
      mpq_class coef = q * sign * factorial(n) / (factorial(n - k) * qpow(alpha, k + 1));
      y = y + PolyExp::term(coef, n - k, mu);
      sign = -sign;
    }
    mpq_class tail = q * ((n % 2 == 0) ? 1 : -1) * factorial(n) / qpow(alpha, n + 1);
    y = y - PolyExp::term(tail, 0, lam);
  }
  return y;
}

}  // namespace

VectorField bracket(const VectorField& a, const VectorField& b) {
  if (!a.valid() || !b.valid() || &a.chart() != &b.chart())
    throw std::invalid_argument("bracket of fields on different charts");
  Chart& ch = a.chart();
  VectorField r(ch);
  std::set<GenId> keys;
  for (const auto& [g, e] : a.comps()) keys.insert(g);
  for (const auto& [g, e] : b.comps()) keys.insert(g);
  for (GenId g : keys) r.set(g, apply(a, b.coeff(g)) - apply(b, a.coeff(g)));
  return r;
}

NonClosed::NonClosed(std::size_t i_, std::size_t j_, std::string rendered_)
    : std::runtime_error("bracket of fields " + std::to_string(i_ + 1) + " and " +
                         std::to_string(j_ + 1) + " leaves the span: " + rendered_),
      i(i_),
      j(j_),
      rendered(std::move(rendered_)) {}

StructureConstants structure_constants(const std::vector<VectorField>& basis) {
  std::size_t n = basis.size();
  if (n == 0) throw std::invalid_argument("empty basis");
  for (const auto& b : basis)
    if (!b.valid() || &b.chart() != &basis[0].chart())
      throw std::invalid_argument("basis fields live on different charts");

  {  // linear independence of the fields
    RowMap rows;
    for (std::size_t k = 0; k < n; ++k)
      for (const auto& [g, e] : basis[k].comps()) add_rows(rows, g, e, k, n);
    std::vector<QVec> mat;
    for (auto& [k, v] : rows) mat.push_back(std::move(v));
    if (rank_rows(std::move(mat), n) != n)
      throw std::invalid_argument("fields are linearly dependent");
  }

  StructureConstants sc;
  sc.dim = n;
  sc.c.assign(n, std::vector<QVec>(n, QVec(n, 0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      VectorField br = bracket(basis[i], basis[j]);
      auto lam = span_solve(basis, br);
      if (!lam) throw NonClosed(i, j, render_field(br));
      for (std::size_t k = 0; k < n; ++k) {
        sc.c[i][j][k] = (*lam)[k];
        sc.c[j][i][k] = -(*lam)[k];
      }
    }
  return sc;
}

std::vector<std::vector<mpq_class>> ad_matrix(const StructureConstants& sc, std::size_t i) {
  std::size_t n = sc.dim;
  QMat A(n, QVec(n, 0));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) A[k][j] = sc.c[i][j][k];
  return A;
}

PolyExp PolyExp::constant(const mpq_class& q) { return term(q, 0, 0); }

PolyExp PolyExp::term(const mpq_class& q, long n, long m) {
  PolyExp p;
  if (q != 0) p.ts_[{n, m}] = q;
  return p;
}

PolyExp PolyExp::operator+(const PolyExp& o) const {
  PolyExp r = *this;
  for (const auto& [k, q] : o.ts_) {
    auto it = r.ts_.find(k);
    if (it == r.ts_.end()) {
      r.ts_[k] = q;
    } else {
      it->second += q;
      if (it->second == 0) r.ts_.erase(it);
    }
  }
  return r;
}

PolyExp PolyExp::operator-(const PolyExp& o) const {
  PolyExp neg;
  for (const auto& [k, q] : o.ts_) neg.ts_[k] = -q;
  return *this + neg;
}

PolyExp PolyExp::operator*(const PolyExp& o) const {
  PolyExp r;
  for (const auto& [ka, qa] : ts_)
    for (const auto& [kb, qb] : o.ts_) {
      std::pair<long, long> k{ka.first + kb.first, ka.second + kb.second};
      auto it = r.ts_.find(k);
      if (it == r.ts_.end()) {
        if (mpq_class p = qa * qb; p != 0) r.ts_[k] = p;
      } else {
        it->second += qa * qb;
        if (it->second == 0) r.ts_.erase(it);
      }
    }
  return r;
}

std::vector<mpq_class> PolyExp::taylor(int order) const {
  std::vector<mpq_class> out(order + 1, 0);
  for (const auto& [nm, q] : ts_) {
    auto [n, m] = nm;
    mpq_class pw = 1;
    for (long p = n; p <= order; ++p) {
      if (p > n) pw *= m;
      if (pw == 0 && p > n) break;
      out[p] += q * pw / factorial(p - n);
    }
  }
  return out;
}

double PolyExp::eval(double s) const {
  double r = 0;
  for (const auto& [nm, q] : ts_) {
    auto [n, m] = nm;
    r += q.get_d() * std::pow(s, (double)n) * std::exp((double)m * s);
  }
  return r;
}

std::string PolyExp::str() const {
  if (ts_.empty()) return "0";
  std::string s;
  for (const auto& [nm, q] : ts_) {
    auto [n, m] = nm;
    mpq_class a = q;
    if (s.empty()) {
      if (a < 0) {
        s += "-";
        a = -a;
      }
    } else {
      s += a < 0 ? " - " : " + ";
      if (a < 0) a = -a;
    }
    std::vector<std::string> parts;
    if (a != 1) parts.push_back(a.get_str());
    if (n == 1) parts.push_back("s");
    if (n > 1) parts.push_back("s^" + std::to_string(n));
    if (m == 1) parts.push_back("e^s");
    if (m == -1) parts.push_back("e^-s");
    if (m != 0 && m != 1 && m != -1) parts.push_back("e^(" + std::to_string(m) + "s)");
    if (parts.empty()) parts.push_back("1");
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) s += "*";
      s += parts[i];
    }
  }
  return s;
}

std::vector<std::vector<PolyExp>> exp_matrix(const std::vector<std::vector<mpq_class>>& M) {
  std::size_t n = M.size();
  for (const auto& row : M)
    if (row.size() != n) throw std::invalid_argument("exp_matrix needs a square matrix");
  if (n == 0) return {};
  std::vector<long> eigs = integer_spectrum(M);

  std::vector<std::vector<PolyExp>> R(n, std::vector<PolyExp>(n));
  QMat P(n, QVec(n, 0));
  for (std::size_t i = 0; i < n; ++i) P[i][i] = 1;
  PolyExp r = PolyExp::term(1, 0, eigs[0]);
  for (std::size_t j = 0;; ++j) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (P[a][b] != 0) R[a][b] = R[a][b] + PolyExp::constant(P[a][b]) * r;
    if (j + 1 >= n) break;
    // P <- (M - eigs[j] I) * P
    QMat A = M;
    for (std::size_t i = 0; i < n; ++i) A[i][i] -= eigs[j];
    QMat np(n, QVec(n, 0));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t l = 0; l < n; ++l) {
        if (A[a][l] == 0) continue;
        for (std::size_t b = 0; b < n; ++b) np[a][b] += A[a][l] * P[l][b];
      }
    P = std::move(np);
    r = ode_step(r, eigs[j + 1]);
  }
  return R;
}

std::vector<std::vector<PolyExp>> adjoint_exp(const StructureConstants& sc, std::size_t i) {
  QMat A = ad_matrix(sc, i);
  for (auto& row : A)
    for (auto& v : row) v = -v;
  return exp_matrix(A);
}

}  // namespace lieclass
