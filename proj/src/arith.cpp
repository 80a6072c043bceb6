#include "hilbsq/arith.hpp"

namespace hilbsq {

Int igcd(Int a, Int b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw std::invalid_argument("make_rat: zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

bool is_integer(const Rat& q) { return q.get_den() == 1; }

Int rat_floor(const Rat& q) {
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Int rat_ceil(const Rat& q) {
  Int r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

std::string rat_str(const Rat& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Int isqrt(const Int& n) {
  if (n < 0) throw std::domain_error("isqrt: negative argument");
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

bool is_square(const Int& n) {
  if (n < 0) return false;
  return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

bool is_square(const Int& n, Int& root) {
  if (!is_square(n)) return false;
  root = isqrt(n);
  return true;
}

std::optional<Rat> rat_sqrt(const Rat& q) {
  if (q < 0) return std::nullopt;
  Int rn, rd;
  if (!is_square(q.get_num(), rn) || !is_square(q.get_den(), rd)) return std::nullopt;
  return make_rat(rn, rd);
}

QuadInt::QuadInt(Int a_, Int b_, Int d_) : a(std::move(a_)), b(std::move(b_)), d(std::move(d_)) {
  if (d <= 0) throw std::domain_error("QuadInt: d must be positive");
  if (is_square(d)) throw std::domain_error("QuadInt: d must not be a perfect square");
}

QuadInt quad_mul(const QuadInt& u, const QuadInt& v) {
  if (u.d != v.d) throw std::invalid_argument("quad_mul: mismatched d");
  return QuadInt(u.a * v.a + u.d * u.b * v.b, u.a * v.b + u.b * v.a, u.d);
}

Int quad_norm(const QuadInt& z) { return z.a * z.a - z.d * z.b * z.b; }

QuadInt quad_conj(const QuadInt& z) { return QuadInt(z.a, -z.b, z.d); }

namespace {

// Forward elimination to row echelon form; returns pivot columns.  Pivots
// only within the first `col_limit` columns when given, so an augmented
// right-hand side is never mistaken for a pivot.
std::vector<int> echelon(RatMat& m, int col_limit = -1) {
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  int pivot_cols = cols;
  if (col_limit >= 0 && col_limit < pivot_cols) pivot_cols = col_limit;
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < pivot_cols && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i) {
      if (m[i][c] != 0) { p = i; break; }
    }
    if (p < 0) continue;
    std::swap(m[r], m[p]);
    const Rat inv = Rat(1) / m[r][c];
    for (int j = c; j < cols; ++j) m[r][j] *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Rat f = m[i][c];
      for (int j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::optional<RatVec> solve_linear(RatMat a, RatVec rhs) {
  const int n = static_cast<int>(a.size());
  for (int i = 0; i < n; ++i) a[i].push_back(rhs[i]);
  const auto pivots = echelon(a, n);
  if (static_cast<int>(pivots.size()) != n) return std::nullopt;
  RatVec x(n);
  for (int i = 0; i < n; ++i) x[pivots[i]] = a[i][n];
  return x;
}

LinearSolution solve_general(RatMat a, RatVec rhs) {
  const int rows = static_cast<int>(a.size());
  const int n = rows ? static_cast<int>(a[0].size()) : 0;
  for (int i = 0; i < rows; ++i) a[i].push_back(rhs[i]);
  const auto pivots = echelon(a, n);

  LinearSolution sol;
  sol.rank = static_cast<int>(pivots.size());
  for (int i = sol.rank; i < rows; ++i) {
    if (a[i][n] != 0) return sol;  // 0 = nonzero: inconsistent
  }
  sol.consistent = true;

  std::vector<bool> is_pivot(n, false);
  for (int c : pivots) is_pivot[c] = true;

  sol.base.assign(n, Rat(0));
  for (int i = 0; i < sol.rank; ++i) sol.base[pivots[i]] = a[i][n];

  for (int c = 0; c < n; ++c) {
    if (is_pivot[c]) continue;
    RatVec dir(n, Rat(0));
    dir[c] = 1;
    for (int i = 0; i < sol.rank; ++i) dir[pivots[i]] = -a[i][c];
    sol.dirs.push_back(std::move(dir));
  }
  return sol;
}

Rat det(RatMat a) {
  const int n = static_cast<int>(a.size());
  Rat result(1);
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int i = c; i < n; ++i) {
      if (a[i][c] != 0) { p = i; break; }
    }
    if (p < 0) return Rat(0);
    if (p != c) {
      std::swap(a[p], a[c]);
      result = -result;
    }
    result *= a[c][c];
    const Rat inv = Rat(1) / a[c][c];
    for (int i = c + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      const Rat f = a[i][c] * inv;
      for (int j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return result;
}

QuadraticRoots solve_rational_quadratic(const Rat& qa, const Rat& qb, const Rat& qc) {
  QuadraticRoots out;
  if (qa == 0) {
    out.degenerate = true;
    if (qb != 0) {
      out.has_real = true;
      out.rational = true;
      out.roots.push_back(-qc / qb);
    }
    return out;
  }
  const Rat disc = qb * qb - 4 * qa * qc;
  if (disc < 0) return out;
  out.has_real = true;
  const auto root = rat_sqrt(disc);
  if (!root) return out;
  out.rational = true;
  out.roots.push_back((-qb + *root) / (2 * qa));
  if (*root != 0) out.roots.push_back((-qb - *root) / (2 * qa));
  return out;
}

}  // namespace hilbsq
