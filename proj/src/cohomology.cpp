#include "hilbsq/cohomology.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace hilbsq::cohomology {

namespace {

void require_positive_t(long long t) {
  if (t < 1) {
    throw std::domain_error("polarisation degree t must be positive, got " +
                            std::to_string(t));
  }
}

void require_same_t(long long ta, long long tb) {
  if (ta != tb) {
    throw std::invalid_argument("classes live on different Hilbert squares (t=" +
                                std::to_string(ta) + " vs t=" +
                                std::to_string(tb) + ")");
  }
}

// Pairing matrix on the rational basis {h^2, h.delta, delta^2, (2/5)q^vee}.
RatMat rational_gram(long long t) {
  const Int T = to_int(t);
  return {
      {Rat(12 * T * T), Rat(0), Rat(-4 * T), Rat(20 * T)},
      {Rat(0), Rat(-4 * T), Rat(0), Rat(0)},
      {Rat(-4 * T), Rat(0), Rat(12), Rat(-20)},
      {Rat(20 * T), Rat(0), Rat(-20), Rat(92)},
  };
}

}  // namespace

bool operator==(const H4Class& x, const H4Class& y) {
  return x.t == y.t && x.c == y.c;
}

H4Class operator+(const H4Class& x, const H4Class& y) {
  require_same_t(x.t, y.t);
  H4Class r{x.t, {}};
  for (int i = 0; i < 4; ++i) r.c[i] = x.c[i] + y.c[i];
  return r;
}

H4Class operator-(const H4Class& x, const H4Class& y) {
  require_same_t(x.t, y.t);
  H4Class r{x.t, {}};
  for (int i = 0; i < 4; ++i) r.c[i] = x.c[i] - y.c[i];
  return r;
}

H4Class operator*(const Rat& k, const H4Class& x) {
  H4Class r{x.t, {}};
  for (int i = 0; i < 4; ++i) r.c[i] = k * x.c[i];
  return r;
}

H4Class from_integral(const H4IntegralCoords& a) {
  require_positive_t(a.t);
  H4Class e{a.t, {}};
  e.c[0] = Rat(a.a[0]) + make_rat(a.a[1], 2);
  e.c[1] = make_rat(-a.a[1], 2);
  e.c[2] = make_rat(a.a[2], 8);
  e.c[3] = make_rat(a.a[2], 8) + Rat(a.a[3]);
  return e;
}

std::optional<H4IntegralCoords> to_integral(const H4Class& e) {
  require_positive_t(e.t);
  const Rat a1 = e.c[0] + e.c[1];
  const Rat a2 = Rat(-2) * e.c[1];
  const Rat a3 = Rat(8) * e.c[2];
  const Rat a4 = e.c[3] - e.c[2];
  for (const Rat* a : {&a1, &a2, &a3, &a4}) {
    if (!is_integer(*a)) return std::nullopt;
  }
  return H4IntegralCoords{
      e.t, {a1.get_num(), a2.get_num(), a3.get_num(), a4.get_num()}};
}

H4Class cup_h2(const NSClass& c1, const NSClass& c2) {
  require_same_t(c1.t, c2.t);
  require_positive_t(c1.t);
  H4Class e{c1.t, {}};
  e.c[0] = Rat(c1.xh * c2.xh);
  e.c[1] = Rat(-(c1.xh * c2.yd + c2.xh * c1.yd));
  e.c[2] = Rat(c1.yd * c2.yd);
  e.c[3] = Rat(0);
  return e;
}

Rat pair_h4(const H4Class& e1, const H4Class& e2) {
  require_same_t(e1.t, e2.t);
  require_positive_t(e1.t);
  const RatMat g = rational_gram(e1.t);
  Rat acc(0);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) acc += e1.c[i] * g[i][j] * e2.c[j];
  }
  return acc;
}

GramH22 gram_h22(long long t) {
  require_positive_t(t);
  const Int T = to_int(t);
  GramH22 g;
  g.t = t;
  g.m = {{{12 * T * T, 6 * T * T, 2 * T, 20 * T},
          {6 * T * T, T * (3 * T - 1), T, 10 * T},
          {2 * T, T, Int(1), Int(9)},
          {20 * T, 10 * T, Int(9), Int(92)}}};
  // Test hook: deliberately corrupt one entry so the self-check machinery in
  // the consistency suite can be exercised end to end.
  if (const char* hook = std::getenv("HILBSQ_CHECK_CORRUPT_GRAM");
      hook != nullptr && *hook != '\0') {
    g.m[3][3] += 1;
  }
  RatMat rm(4, RatVec(4));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) rm[i][j] = Rat(g.m[i][j]);
  }
  const Rat d = det(rm);
  if (!is_integer(d)) {
    throw invariant_error("integral Gram determinant is not an integer at t=" +
                          std::to_string(t));
  }
  g.discriminant = d.get_num();
  return g;
}

H4Class iota_star_h4(const H4Class& e) {
  const auto aut = picard::aut_result(e.t);
  if (!aut.nontrivial) {
    throw std::domain_error("no nontrivial automorphism at t=" +
                            std::to_string(e.t));
  }
  const Int c = aut.unit->x;
  const Int d = aut.unit->y;
  const Int T = to_int(e.t);
  // Images of the basis classes, each expanded in {h^2, h.delta, delta^2, Q}.
  const std::array<std::array<Int, 4>, 4> img = {{
      {c * c, -2 * c * T * d, T * T * d * d, Int(0)},   // iota* h^2
      {c * d, -(c * c + T * d * d), T * c * d, Int(0)}, // iota* h.delta
      {d * d, -2 * c * d, c * c, Int(0)},               // iota* delta^2
      {Int(0), Int(0), Int(0), Int(1)},                 // iota* (2/5)q^vee
  }};
  H4Class r{e.t, {}};
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) r.c[i] += e.c[j] * Rat(img[j][i]);
  }
  return r;
}

Rat sigma_functional(const H4Class& e) {
  require_positive_t(e.t);
  return Rat(to_int(2 * e.t)) * e.c[0] - Rat(2) * e.c[2] + Rat(10) * e.c[3];
}

Int fujiki_quartic(const NSClass& c) {
  const Int q = picard::bbf_q(c);
  const Int value = 3 * q * q;
  const H4Class sq = cup_h2(c, c);
  if (pair_h4(sq, sq) != Rat(value)) {
    throw invariant_error("Fujiki relation violated at t=" + std::to_string(c.t));
  }
  return value;
}

H6Class reduce_to_h6(const H4Class& e, const NSClass& c) {
  require_same_t(e.t, c.t);
  require_positive_t(e.t);
  // Multiplication rules into {h^3, h^2.delta}:
  //   h.delta^2 = -(1/3t) h^3,      delta^3 = -(3/t) h^2.delta,
  //   Q.h = (5/3t) h^3,             Q.delta = (5/t) h^2.delta.
  const Rat x{c.xh};
  const Rat y{c.yd};
  const Rat t3 = Rat(to_int(3 * e.t));
  const Rat t1 = Rat(to_int(e.t));
  H6Class w;
  w.t = e.t;
  w.u = e.c[0] * x + e.c[1] * y / t3 - e.c[2] * x / t3 + Rat(5) * e.c[3] * x / t3;
  w.v = -e.c[0] * y + e.c[1] * x + Rat(3) * e.c[2] * y / t1 -
        Rat(5) * e.c[3] * y / t1;
  return w;
}

std::optional<std::pair<Int, Int>> h6_integral(const H6Class& w) {
  require_positive_t(w.t);
  const Rat a = Rat(to_int(6 * w.t)) * w.u;
  const Rat b = Rat(to_int(4 * w.t)) * w.v;
  if (!is_integer(a) || !is_integer(b)) return std::nullopt;
  return std::make_pair(a.get_num(), b.get_num());
}

Rat dual_pairing(const NSClass& c) {
  // The dual of a primitive class is c / div(c), so the pairing is q / div.
  return make_rat(picard::bbf_q(c), picard::divisibility(c));
}

}  // namespace hilbsq::cohomology
