#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "hilbsq/irreducibility.hpp"

namespace hilbsq::oracles {

using cohomology::H4Class;
using cohomology::H4IntegralCoords;
using picard::NSClass;

std::vector<std::pair<Int, Int>> pell_brute_force(long long d, long long n,
                                                  const Int& y_max) {
  std::vector<std::pair<Int, Int>> out;
  for (Int y = 0; y <= y_max; ++y) {
    const Int rhs = to_int(d) * y * y + to_int(n);
    if (rhs < 0) continue;
    Int x;
    if (is_square(rhs, x)) out.emplace_back(x, y);
  }
  return out;
}

namespace {

bool local_equiv(long long d, long long n, const Int& x1, const Int& y1,
                 const Int& x2, const Int& y2) {
  const Int num1 = x1 * x2 - to_int(d) * y1 * y2;
  const Int num2 = x1 * y2 - x2 * y1;
  const Int nn = to_int(n);
  return mpz_divisible_p(num1.get_mpz_t(), nn.get_mpz_t()) != 0 &&
         mpz_divisible_p(num2.get_mpz_t(), nn.get_mpz_t()) != 0;
}

}  // namespace

std::vector<BruteClass> pell_classes_brute_force(long long d, long long n,
                                                 const std::pair<Int, Int>& unit) {
  const Int& c1 = unit.first;
  const Int& b1 = unit.second;
  const Int nn = abs(to_int(n));
  const Int y_max = n > 0 ? isqrt(b1 * b1 * nn / (2 * (c1 + 1)))
                          : isqrt(b1 * b1 * nn / (2 * (c1 - 1)));

  // Signed solution list inside the window.
  std::vector<std::pair<Int, Int>> sols;
  for (const auto& [x, y] : pell_brute_force(d, n, y_max)) {
    sols.emplace_back(x, y);
    if (x != 0) sols.emplace_back(-x, y);
  }

  // Group by the definition of equivalence; transitivity lets a single
  // representative stand for the whole group.
  std::vector<std::vector<std::pair<Int, Int>>> groups;
  for (const auto& s : sols) {
    bool placed = false;
    for (auto& g : groups) {
      if (local_equiv(d, n, s.first, s.second, g.front().first, g.front().second)) {
        g.push_back(s);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({s});
  }

  std::vector<BruteClass> out;
  for (const auto& g : groups) {
    const std::pair<Int, Int>* best = &g.front();
    for (const auto& s : g) {
      if (s.second < best->second ||
          (s.second == best->second && s.first > best->first)) {
        best = &s;
      }
    }
    out.push_back(BruteClass{best->first, best->second});
  }
  std::sort(out.begin(), out.end(), [](const BruteClass& u, const BruteClass& v) {
    if (u.y != v.y) return u.y < v.y;
    return u.x < v.x;
  });
  return out;
}

std::pair<Int, Int> chakravala_unit(long long d) {
  const Int dd = to_int(d);
  Int root;
  if (d < 2 || is_square(dd, root)) {
    throw std::domain_error("chakravala: d must be a nonsquare >= 2");
  }
  const Int base = isqrt(dd);
  Int a = (dd - base * base <= (base + 1) * (base + 1) - dd) ? base : Int(base + 1);
  if (a == 0) a = 1;
  Int b = 1;
  Int k = a * a - dd;

  for (int iter = 0; iter < 200000; ++iter) {
    if (k == 1) return {a, b};
    if (k == -1) return {a * a + dd * b * b, 2 * a * b};

    const Int absk = abs(k);
    Int binv;
    if (mpz_invert(binv.get_mpz_t(), b.get_mpz_t(), absk.get_mpz_t()) == 0) {
      throw std::logic_error("chakravala: lost coprimality");
    }
    Int m0 = ((-a) * binv) % absk;
    if (m0 < 0) m0 += absk;
    // Closest m = m0 (mod |k|) to sqrt(d), positive, minimizing |m^2 - d|.
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), Int(base - m0).get_mpz_t(), absk.get_mpz_t());
    Int m1 = m0 + q * absk;
    const Int m2 = m1 + absk;
    Int m;
    if (m1 <= 0) {
      m = m2;
    } else {
      m = (abs(m1 * m1 - dd) <= abs(m2 * m2 - dd)) ? m1 : m2;
    }

    Int na, nb, nk;
    mpz_divexact(na.get_mpz_t(), Int(a * m + dd * b).get_mpz_t(), absk.get_mpz_t());
    mpz_divexact(nb.get_mpz_t(), Int(a + b * m).get_mpz_t(), absk.get_mpz_t());
    mpz_divexact(nk.get_mpz_t(), Int(m * m - dd).get_mpz_t(), k.get_mpz_t());
    a = na;
    b = nb;
    k = nk;
  }
  throw std::logic_error("chakravala: did not terminate");
}

namespace {

// Quick quadratic-residue rejection tables for the fast 64-bit scan.
struct SquareFilter {
  std::uint64_t mask64 = 0;
  bool mod63[63] = {};
  bool mod65[65] = {};
  bool mod11[11] = {};

  SquareFilter() {
    for (unsigned i = 0; i < 64; ++i) mask64 |= std::uint64_t(1) << ((i * i) & 63);
    for (unsigned i = 0; i < 63; ++i) mod63[(i * i) % 63] = true;
    for (unsigned i = 0; i < 65; ++i) mod65[(i * i) % 65] = true;
    for (unsigned i = 0; i < 11; ++i) mod11[(i * i) % 11] = true;
  }

  bool maybe_square(std::uint64_t v) const {
    if (((mask64 >> (v & 63)) & 1) == 0) return false;
    return mod63[v % 63] && mod65[v % 65] && mod11[v % 11];
  }
};

bool u64_is_square(std::uint64_t v) {
  auto r = static_cast<std::uint64_t>(
      std::max(0.0L, std::sqrt(static_cast<long double>(v))));
  while (r > 0 && r * r > v) --r;
  while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= v) ++r;
  return r * r == v;
}

}  // namespace

bool pell_solvable_brute_force(long long d, long long n) {
  if (n == 0) throw std::invalid_argument("oracle: n must be nonzero");
  const auto unit = chakravala_unit(d);
  const Int& c1 = unit.first;
  const Int& b1 = unit.second;
  const Int nn = abs(to_int(n));
  const Int y_max = n > 0 ? isqrt(b1 * b1 * nn / (2 * (c1 + 1)))
                          : isqrt(b1 * b1 * nn / (2 * (c1 - 1)));

  // 64-bit fast path when d*y^2 + |n| stays below 2^63 over the whole window.
  const Int extreme = to_int(d) * y_max * y_max + nn;
  if (mpz_fits_ulong_p(y_max.get_mpz_t()) != 0 &&
      extreme < Int("9223372036854775807")) {
    static const SquareFilter filter;
    const auto ym = static_cast<std::uint64_t>(mpz_get_ui(y_max.get_mpz_t()));
    const auto du = static_cast<std::uint64_t>(d);
    for (std::uint64_t y = 0; y <= ym; ++y) {
      const std::int64_t v = static_cast<std::int64_t>(du * y * y) + n;
      if (v < 0) continue;
      const auto vu = static_cast<std::uint64_t>(v);
      if (filter.maybe_square(vu) && u64_is_square(vu)) return true;
    }
    return false;
  }

  for (Int y = 0; y <= y_max; ++y) {
    const Int rhs = to_int(d) * y * y + to_int(n);
    if (rhs < 0) continue;
    if (is_square(rhs)) return true;
  }
  return false;
}

Rat pair_products(const NSClass& a1, const NSClass& a2, const NSClass& a3,
                  const NSClass& a4) {
  const Int p12 = picard::bbf_pair(a1, a2);
  const Int p34 = picard::bbf_pair(a3, a4);
  const Int p13 = picard::bbf_pair(a1, a3);
  const Int p24 = picard::bbf_pair(a2, a4);
  const Int p14 = picard::bbf_pair(a1, a4);
  const Int p23 = picard::bbf_pair(a2, a3);
  return Rat(p12 * p34 + p13 * p24 + p14 * p23);
}

RatMat h4_gram_from_products(long long t) {
  const NSClass h = picard::h_class(t);
  const NSClass del = picard::delta_class(t);
  const std::array<std::pair<NSClass, NSClass>, 3> products = {
      std::make_pair(h, h), std::make_pair(h, del), std::make_pair(del, del)};

  RatMat g(4, RatVec(4, Rat(0)));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      g[i][j] = pair_products(products[i].first, products[i].second,
                              products[j].first, products[j].second);
    }
  }
  // <(2/5)q^vee, ab> = (2/5) * 25 * (a, b) = 10 (a, b).
  for (int i = 0; i < 3; ++i) {
    const Rat v =
        Rat(10) * Rat(picard::bbf_pair(products[i].first, products[i].second));
    g[3][i] = v;
    g[i][3] = v;
  }
  // <(2/5)q^vee, (2/5)q^vee> = (4/25) * 575 = 92.
  g[3][3] = Rat(92);
  return g;
}

std::pair<Rat, Rat> h6_reduce_by_pairing(const H4Class& e, const NSClass& c) {
  const long long t = e.t;
  const NSClass h = picard::h_class(t);
  const NSClass del = picard::delta_class(t);
  const H4Class hh = cohomology::cup_h2(h, h);
  const H4Class hd = cohomology::cup_h2(h, del);

  // <h^3, c'> and <h^2 delta, c'> through associativity of the cup product.
  RatMat m(2, RatVec(2));
  RatVec rhs(2);
  const NSClass probes[2] = {h, del};
  for (int i = 0; i < 2; ++i) {
    const H4Class hc = cohomology::cup_h2(h, probes[i]);
    m[i][0] = cohomology::pair_h4(hh, hc);
    m[i][1] = cohomology::pair_h4(hd, hc);
    rhs[i] = cohomology::pair_h4(e, cohomology::cup_h2(c, probes[i]));
  }
  const auto sol = solve_linear(std::move(m), std::move(rhs));
  if (!sol) throw std::logic_error("oracle: degenerate H^6 probe system");
  return {(*sol)[0], (*sol)[1]};
}

std::vector<std::pair<H4IntegralCoords, H4IntegralCoords>>
box_decomposition_search(long long t, long long bound) {
  const auto aut = picard::aut_result(t);
  if (!aut.nontrivial) {
    throw std::domain_error("oracle: t admits no nontrivial automorphism");
  }
  const NSClass D = *aut.witness;
  const NSClass h = picard::h_class(t);
  const H4Class dsq = cohomology::cup_h2(D, D);
  const H4Class hh = cohomology::cup_h2(h, h);
  const auto alpha_dsq = cohomology::to_integral(dsq);
  if (!alpha_dsq) throw std::logic_error("oracle: D^2 is not integral");

  // Linear functionals and the involution in integral coordinates, evaluated
  // once on the basis; all small enough for 64-bit arithmetic at the degrees
  // this oracle is used for.
  long long degv[4], sigv[4], d2v[4], iota[4][4];
  const Int two_t = to_int(2 * t);
  for (int i = 0; i < 4; ++i) {
    H4IntegralCoords ei{t, {Int(0), Int(0), Int(0), Int(0)}};
    ei.a[i] = 1;
    const H4Class basis = cohomology::from_integral(ei);
    const Rat deg = cohomology::pair_h4(basis, hh) / Rat(two_t);
    const Rat sig = cohomology::sigma_functional(basis);
    const Rat d2 = cohomology::pair_h4(basis, dsq);
    if (!is_integer(deg) || !is_integer(sig) || !is_integer(d2)) {
      throw std::logic_error("oracle: non-integral functional on the lattice");
    }
    degv[i] = deg.get_num().get_si();
    sigv[i] = sig.get_num().get_si();
    d2v[i] = d2.get_num().get_si();
    const auto image = cohomology::to_integral(cohomology::iota_star_h4(basis));
    if (!image) throw std::logic_error("oracle: involution leaves the lattice");
    for (int j = 0; j < 4; ++j) iota[j][i] = image->a[j].get_si();
  }
  const Rat deg_max_rat = cohomology::pair_h4(dsq, hh) / Rat(two_t);
  const long long deg_max = deg_max_rat.get_num().get_si();

  std::vector<std::array<long long, 4>> hits;
  for (long long x1 = -bound; x1 <= bound; ++x1) {
    for (long long x2 = -bound; x2 <= bound; ++x2) {
      for (long long x3 = -bound; x3 <= bound; ++x3) {
        for (long long s = 0; s <= 2; ++s) {
          const long long num = s - sigv[0] * x1 - sigv[1] * x2 - sigv[2] * x3;
          if (num % sigv[3] != 0) continue;
          const long long x4 = num / sigv[3];
          const long long a[4] = {x1, x2, x3, x4};
          long long deg = 0, d2 = 0;
          for (int i = 0; i < 4; ++i) {
            deg += degv[i] * a[i];
            d2 += d2v[i] * a[i];
          }
          if (deg < 0 || deg > deg_max) continue;
          if (d2 <= 0 || d2 >= 12) continue;
          bool fixed = true;
          for (int i = 0; i < 4 && fixed; ++i) {
            long long img = 0;
            for (int j = 0; j < 4; ++j) img += iota[i][j] * a[j];
            fixed = img == a[i];
          }
          if (!fixed) continue;
          hits.push_back({x1, x2, x3, x4});
        }
      }
    }
  }

  // Exact re-verification of both halves through the library's own
  // functionals, then pairing with the complement.
  std::vector<std::pair<H4IntegralCoords, H4IntegralCoords>> out;
  for (const auto& a : hits) {
    H4IntegralCoords A{t, {to_int(a[0]), to_int(a[1]), to_int(a[2]), to_int(a[3])}};
    H4IntegralCoords B{t, {}};
    for (int i = 0; i < 4; ++i) B.a[i] = alpha_dsq->a[i] - A.a[i];
    auto passes = [&](const H4IntegralCoords& half) {
      const H4Class e = cohomology::from_integral(half);
      const Rat deg = cohomology::pair_h4(e, hh) / Rat(two_t);
      const Rat sig = cohomology::sigma_functional(e);
      const Rat d2 = cohomology::pair_h4(e, dsq);
      return deg >= 0 && deg <= deg_max_rat && sig >= 0 && sig <= 2 && d2 > 0 &&
             d2 < 12 && cohomology::iota_star_h4(e) == e;
    };
    if (passes(A) && passes(B)) out.emplace_back(A, B);
  }
  std::sort(out.begin(), out.end(), [](const auto& u, const auto& v) {
    return u.first.a < v.first.a;
  });
  return out;
}

}  // namespace hilbsq::oracles
