#include "hilbsq/picard.hpp"

#include <stdexcept>
#include <string>

namespace hilbsq::picard {

namespace {

void require_positive_t(long long t) {
  if (t < 1) {
    throw std::domain_error("polarisation degree t must be positive, got " +
                            std::to_string(t));
  }
}

void require_same_t(const NSClass& a, const NSClass& b) {
  if (a.t != b.t) {
    throw std::invalid_argument("classes live on different Hilbert squares (t=" +
                                std::to_string(a.t) + " vs t=" +
                                std::to_string(b.t) + ")");
  }
}

// Coefficients of c against the rays (1, 0) and (1, s) in (x, y)-space,
// i.e. against h and h - s*delta.  The system is triangular but it is
// solved as a generic 2x2 to keep the cone test honest: a class is inside
// the cone iff both coefficients are non-negative.
std::pair<Rat, Rat> ray_coefficients(const NSClass& c, const Rat& s) {
  RatMat m = {{Rat(1), Rat(1)}, {Rat(0), s}};
  RatVec rhs = {Rat(c.xh), Rat(c.yd)};
  auto sol = solve_linear(m, rhs);
  if (!sol) {
    throw invariant_error("degenerate cone rays for t=" + std::to_string(c.t));
  }
  return {(*sol)[0], (*sol)[1]};
}

}  // namespace

NSClass h_class(long long t) { return NSClass{t, Int(1), Int(0)}; }

NSClass delta_class(long long t) { return NSClass{t, Int(0), Int(-1)}; }

bool operator==(const NSClass& a, const NSClass& b) {
  return a.t == b.t && a.xh == b.xh && a.yd == b.yd;
}

NSClass operator+(const NSClass& a, const NSClass& b) {
  require_same_t(a, b);
  return NSClass{a.t, a.xh + b.xh, a.yd + b.yd};
}

NSClass operator-(const NSClass& a, const NSClass& b) {
  require_same_t(a, b);
  return NSClass{a.t, a.xh - b.xh, a.yd - b.yd};
}

NSClass operator*(const Int& k, const NSClass& c) {
  return NSClass{c.t, k * c.xh, k * c.yd};
}

Int bbf_pair(const NSClass& c1, const NSClass& c2) {
  require_same_t(c1, c2);
  require_positive_t(c1.t);
  return 2 * to_int(c1.t) * c1.xh * c2.xh - 2 * c1.yd * c2.yd;
}

Int bbf_q(const NSClass& c) { return bbf_pair(c, c); }

Int divisibility(const NSClass& c) {
  require_positive_t(c.t);
  if (igcd(c.xh, c.yd) != 1) {
    throw std::domain_error("divisibility is defined for primitive classes only");
  }
  // (x*h - y*delta, -) pairs to x*Z through the unimodular part containing h
  // and to 2y*Z through delta.
  return igcd(c.xh, 2 * c.yd);
}

ConeSlopes cone_slopes(long long t) {
  require_positive_t(t);
  ConeSlopes s;
  s.t = t;
  Int root;
  if (is_square(to_int(t), root)) {
    // Square degree: all three cones share the boundary slope sqrt(t).
    Rat r{root};
    s.mu = r;
    s.nu = r;
    s.omega = r;
    return s;
  }
  const auto unit = pell::fundamental_unit(t);  // (c, d), c^2 - t d^2 = 1
  s.mu = make_rat(to_int(t) * unit.y, unit.x);
  s.omega = make_rat(unit.x, unit.y);
  if (pell::is_solvable(4 * t, 5)) {
    const auto m5 = pell::minimal_positive(4 * t, 5);
    if (!m5) {
      throw invariant_error("P_{4t}(5) solvable but has no minimal positive solution, t=" +
                            std::to_string(t));
    }
    s.nu = make_rat(2 * to_int(t) * m5->y, m5->x);
  } else {
    s.nu = s.mu;
  }
  if (!(s.mu > 0 && s.mu <= s.omega && s.nu <= s.mu)) {
    throw invariant_error("cone slope ordering violated at t=" + std::to_string(t));
  }
  return s;
}

bool is_ample(const NSClass& c, const ConeSlopes& slopes) {
  if (c.t != slopes.t) {
    throw std::invalid_argument("cone slopes computed for a different t");
  }
  const auto [alpha, beta] = ray_coefficients(c, slopes.nu);
  return alpha > 0 && beta > 0;
}

bool is_ample(const NSClass& c) { return is_ample(c, cone_slopes(c.t)); }

bool is_pseudoeffective(const NSClass& c, const ConeSlopes& slopes) {
  if (c.t != slopes.t) {
    throw std::invalid_argument("cone slopes computed for a different t");
  }
  // Cone spanned by delta = (0, -1) and h - omega*delta = (1, omega).
  RatMat m = {{Rat(0), Rat(1)}, {Rat(-1), slopes.omega}};
  RatVec rhs = {Rat(c.xh), Rat(c.yd)};
  auto sol = solve_linear(m, rhs);
  if (!sol) {
    throw invariant_error("degenerate pseudoeffective rays for t=" +
                          std::to_string(c.t));
  }
  return (*sol)[0] >= 0 && (*sol)[1] >= 0;
}

bool is_pseudoeffective(const NSClass& c) {
  return is_pseudoeffective(c, cone_slopes(c.t));
}

AutResult aut_result(long long t) {
  if (t < 2) {
    throw std::domain_error("automorphism criterion needs t >= 2, got " +
                            std::to_string(t));
  }
  AutResult r;
  r.t = t;
  Int root;
  r.t_is_square = is_square(to_int(t), root);
  if (r.t_is_square) {
    return r;  // unit group is trivial in the square case: no involution
  }
  r.pell_4t_5_solvable = pell::is_solvable(4 * t, 5);
  const auto cf = pell::cf_expand(t);
  r.unit = cf.unit;
  r.neg_pell_solvable = cf.negative.has_value();
  r.neg = cf.negative;
  r.nontrivial = !r.pell_4t_5_solvable && r.neg_pell_solvable;
  if (r.nontrivial) {
    // D = b*h - a*delta with (a, b) the minimal solution of a^2 - t b^2 = -1.
    NSClass d{t, r.neg->y, r.neg->x};
    if (bbf_q(d) != 2) {
      throw invariant_error("polarisation witness has q != 2 at t=" +
                            std::to_string(t));
    }
    if (!is_ample(d)) {
      throw invariant_error("polarisation witness is not ample at t=" +
                            std::to_string(t));
    }
    r.witness = d;
  }
  return r;
}

bool aut_is_nontrivial(long long t) { return aut_result(t).nontrivial; }

NSClass InvolutionMatrix::apply(const NSClass& c) const {
  if (c.t != t) {
    throw std::invalid_argument("involution matrix computed for a different t");
  }
  return NSClass{t, m[0][0] * c.xh + m[0][1] * c.yd,
                 m[1][0] * c.xh + m[1][1] * c.yd};
}

InvolutionMatrix involution_matrix(long long t) {
  const auto aut = aut_result(t);
  if (!aut.nontrivial) {
    throw std::domain_error("no nontrivial automorphism at t=" + std::to_string(t));
  }
  const Int c = aut.unit->x;
  const Int d = aut.unit->y;
  InvolutionMatrix iota;
  iota.t = t;
  iota.m = {{{c, -d}, {to_int(t) * d, -c}}};
  // The matrix is an involution fixing the Beauville-Bogomolov form; both
  // facts reduce to c^2 - t d^2 = 1, checked here once and for all.
  const Int det = iota.m[0][0] * iota.m[1][1] - iota.m[0][1] * iota.m[1][0];
  if (det != -1) {
    throw invariant_error("involution matrix determinant is not -1 at t=" +
                          std::to_string(t));
  }
  return iota;
}

}  // namespace hilbsq::picard
