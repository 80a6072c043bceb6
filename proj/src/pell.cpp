#include "hilbsq/pell.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace hilbsq::pell {

namespace {

constexpr long long kMaxD = 4'000'000'000'000'000'000LL;

void require_valid_d(long long d) {
  if (d < 2) throw std::domain_error("pell: d must be >= 2");
  if (d > kMaxD) throw std::domain_error("pell: d out of supported range");
  if (is_square(to_int(d))) throw std::domain_error("pell: d must not be a square");
}

// Continued-fraction scanner for sqrt(d). State is (P_k, Q_k) with
//   P_0 = 0, Q_0 = 1, a_k = floor((a_0 + P_k)/Q_k),
//   P_{k+1} = a_k Q_k - P_k, Q_{k+1} = (d - P_{k+1}^2)/Q_k,
// positioned at k >= 1. The convergent (p_{k-1}, q_{k-1}) satisfies
//   p_{k-1}^2 - d q_{k-1}^2 = (-1)^k Q_k,
// and the period ends at the first k >= 1 with Q_k = 1. State fits in
// long long for d <= kMaxD; convergents are tracked in Int on demand.
struct CfScanner {
  long long d, a0, P, Q;
  long k = 1;
  bool track;
  Int p, q;    // p_{k-1}, q_{k-1}
  Int pp, qq;  // p_{k-2}, q_{k-2}

  CfScanner(long long d_, bool track_convergents)
      : d(d_), a0(isqrt(to_int(d_)).get_si()), track(track_convergents) {
    P = a0;
    Q = d - a0 * a0;
    if (track) {
      p = to_int(a0);
      q = 1;
      pp = 1;
      qq = 0;
    }
  }

  // (-1)^k Q_k, the norm of the current convergent.
  long long value() const { return (k % 2 == 0) ? Q : -Q; }

  bool at_period_end() const { return Q == 1; }

  void step() {
    const long long a = (a0 + P) / Q;
    if (track) {
      const Int A = to_int(a);
      Int pn = A * p + pp;
      Int qn = A * q + qq;
      pp = std::move(p);
      qq = std::move(q);
      p = std::move(pn);
      q = std::move(qn);
    }
    P = a * Q - P;
    Q = (d - P * P) / Q;
    ++k;
  }
};

std::map<long long, CfData> g_cf_cache;
std::mutex g_cf_mutex;

// Divisors g with g^2 | n, paired with the cofactor n / g^2.
std::vector<std::pair<long long, long long>> square_divisors(long long n) {
  const long long an = n < 0 ? -n : n;
  std::vector<std::pair<long long, long long>> out;
  for (long long g = 1; g * g <= an; ++g)
    if (an % (g * g) == 0) out.emplace_back(g, n / (g * g));
  return out;
}

// Minimal x > 0, y > 0 member of the class through the signed element
// (x, y); walks the unit orbit upward starting two steps down.
std::optional<PellSolution> class_min_positive(Int x, Int y, const PellSolution& u,
                                               long long d, long long n) {
  const Int& c1 = u.x;
  const Int& b1 = u.y;
  const Int D = to_int(d);
  for (int i = 0; i < 2; ++i) {  // apply u^{-1} = (c1, -b1) twice
    Int xn = x * c1 - D * y * b1;
    Int yn = y * c1 - x * b1;
    x = std::move(xn);
    y = std::move(yn);
  }
  std::optional<PellSolution> best;
  for (int i = 0; i < 72; ++i) {
    if (y < 0) {
      x = -x;
      y = -y;
    }
    if (x > 0 && y > 0) {
      if (!best || x < best->x)
        best = PellSolution{x, y, d, n};
      else
        break;  // x grows monotonically once positive
    }
    Int xn = x * c1 + D * y * b1;
    Int yn = x * b1 + y * c1;
    x = std::move(xn);
    y = std::move(yn);
  }
  return best;
}

}  // namespace

CfData cf_expand(long long d) {
  require_valid_d(d);
  {
    std::lock_guard<std::mutex> lock(g_cf_mutex);
    auto it = g_cf_cache.find(d);
    if (it != g_cf_cache.end()) return it->second;
  }
  CfScanner s(d, true);
  while (!s.at_period_end()) s.step();
  CfData out;
  out.d = d;
  out.period = s.k;
  const bool odd = (s.k % 2 != 0);
  const Int D = to_int(d);
  PellSolution z{s.p, s.q, d, odd ? -1LL : 1LL};
  if (odd) {
    out.negative = z;
    out.unit = PellSolution{z.x * z.x + D * z.y * z.y, 2 * z.x * z.y, d, 1};
  } else {
    out.unit = z;
  }
  if (quad_norm(QuadInt(out.unit.x, out.unit.y, D)) != 1)
    throw invariant_error("pell: continued fraction produced a non-unit");
  std::lock_guard<std::mutex> lock(g_cf_mutex);
  return g_cf_cache.emplace(d, out).first->second;
}

PellSolution fundamental_unit(long long d) { return cf_expand(d).unit; }

std::optional<PellSolution> minimal_negative(long long d) { return cf_expand(d).negative; }

bool are_equivalent(const Int& x1, const Int& y1, const Int& x2, const Int& y2,
                    long long d, long long n) {
  if (n == 0) throw std::invalid_argument("pell: n must be nonzero");
  const Int nn = to_int(n);
  const Int dot = x1 * x2 - to_int(d) * y1 * y2;
  const Int cross = x1 * y2 - x2 * y1;
  return mpz_divisible_p(dot.get_mpz_t(), nn.get_mpz_t()) &&
         mpz_divisible_p(cross.get_mpz_t(), nn.get_mpz_t());
}

bool are_equivalent(const PellSolution& s1, const PellSolution& s2) {
  if (s1.d != s2.d || s1.n != s2.n)
    throw std::invalid_argument("pell: solutions belong to different equations");
  return are_equivalent(s1.x, s1.y, s2.x, s2.y, s1.d, s1.n);
}

SolutionClassSet solve_pell_type(long long d, long long n,
                                 std::optional<long long> window_cap) {
  require_valid_d(d);
  if (n == 0) throw std::invalid_argument("pell: n must be nonzero");

  const PellSolution u = fundamental_unit(d);
  const Int& c1 = u.x;
  const Int& b1 = u.y;
  const Int D = to_int(d);
  const Int N = to_int(n);
  const Int absn = abs(N);

  // Every class has exactly one representative (x, y) with
  //   n > 0:  0 <= y  and  y^2 <= b1^2 n / (2 (c1 + 1)),
  //   n < 0:  y^2 >= |n| / d  and  y^2 <= b1^2 |n| / (2 (c1 - 1)).
  const Int den = 2 * (n > 0 ? Int(c1 + 1) : Int(c1 - 1));
  const Int num = b1 * b1 * absn;
  Int ymin = 0;
  Int ymax = isqrt(num / den);
  while ((ymax + 1) * (ymax + 1) * den <= num) ++ymax;
  if (n < 0) {
    ymin = isqrt(absn / D);
    while (ymin * ymin * D < absn) ++ymin;
  }

  SolutionClassSet out;
  out.d = d;
  out.n = n;
  if (ymax < ymin) return out;

  const long long cap = window_cap.value_or(kDefaultWindowCap);
  if (ymax - ymin + 1 > to_int(cap))
    throw std::domain_error("pell: search window exceeds the safety bound");

  // all solutions in the window, signed
  std::vector<std::pair<Int, Int>> pool;
  for (Int y = ymin; y <= ymax; ++y) {
    Int rhs = N + D * y * y, x;
    if (rhs < 0 || !is_square(rhs, x)) continue;
    pool.emplace_back(x, y);
    if (x != 0) pool.emplace_back(-x, y);
  }

  std::vector<std::vector<std::pair<Int, Int>>> classes;
  for (const auto& sol : pool) {
    bool placed = false;
    for (auto& cls : classes)
      if (are_equivalent(sol.first, sol.second, cls[0].first, cls[0].second, d, n)) {
        cls.push_back(sol);
        placed = true;
        break;
      }
    if (!placed) classes.push_back({sol});
  }

  for (auto& mem : classes) {
    std::sort(mem.begin(), mem.end(), [](const auto& l, const auto& r) {
      return l.second != r.second ? l.second < r.second : l.first > r.first;
    });
    const Int& fx = mem[0].first;  // the x > 0 member when both signs occur
    const Int& fy = mem[0].second;
    const bool self_paired =
        fx == 0 || (mem.size() > 1 && mem[1].second == fy && mem[1].first == -fx);
    SolutionClass sc;
    sc.fundamental = PellSolution{abs(fx), fy, d, n};
    sc.sign = fx < 0 ? -1 : 1;
    sc.conjugate_paired = !self_paired;
    out.fundamentals.push_back(sc);

    auto pos = class_min_positive(fx, fy, u, d, n);
    if (pos && (!out.minimal_positive || pos->x < out.minimal_positive->x))
      out.minimal_positive = pos;
  }

  std::sort(out.fundamentals.begin(), out.fundamentals.end(),
            [](const SolutionClass& l, const SolutionClass& r) {
              if (l.fundamental.y != r.fundamental.y)
                return l.fundamental.y < r.fundamental.y;
              if (l.fundamental.x != r.fundamental.x)
                return l.fundamental.x < r.fundamental.x;
              return l.sign > r.sign;
            });
  return out;
}

bool is_solvable(long long d, long long n) {
  require_valid_d(d);
  if (n == 0) throw std::invalid_argument("pell: n must be nonzero");

  if (is_square(to_int(n))) return true;  // (sqrt(n), 0)
  if (n < 0 && (-n) % d == 0 && is_square(to_int(-n / d))) return true;  // (0, sqrt(-n/d))

  if (to_int(n) * to_int(n) < to_int(d)) {
    // Positive primitive solutions are convergents of sqrt(d), so the norms
    // (-1)^k Q_k over two periods decide solvability for every cofactor.
    const auto targets = square_divisors(n);
    CfScanner s(d, false);
    long period = 0;
    while (true) {
      const long long v = s.value();
      for (const auto& [g, m] : targets)
        if (v == m) return true;
      if (period == 0 && s.at_period_end()) period = s.k;
      if (period != 0 && s.k >= 2 * period) return false;
      s.step();
    }
  }

  return !solve_pell_type(d, n).fundamentals.empty();
}

std::optional<PellSolution> minimal_positive(long long d, long long n) {
  require_valid_d(d);
  if (n == 0) throw std::invalid_argument("pell: n must be nonzero");

  if (to_int(n) * to_int(n) < to_int(d)) {
    const auto targets = square_divisors(n);
    std::optional<PellSolution> best;
    CfScanner s(d, true);
    long period = 0;
    while (true) {
      const long long v = s.value();
      for (const auto& [g, m] : targets)
        if (v == m) {
          PellSolution cand{to_int(g) * s.p, to_int(g) * s.q, d, n};
          if (!best || cand.x < best->x) best = cand;
        }
      if (period == 0 && s.at_period_end()) period = s.k;
      if (period != 0 && s.k >= 2 * period) break;
      s.step();
    }
    return best;
  }

  return solve_pell_type(d, n).minimal_positive;
}

}  // namespace hilbsq::pell
