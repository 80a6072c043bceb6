#include "hilbsq/fixedlocus.hpp"

#include <array>
#include <stdexcept>
#include <string>

#include "hilbsq/picard.hpp"

namespace hilbsq::fixedlocus {

namespace {

using picard::NSClass;

// Coefficient matrix of the self-intersection quadric
//   3t^2 x^2 - t y^2 + 3 z^2 + 23 w^2 - 2t xz + 10t xw - 10 zw
// as a symmetric bilinear form.
RatMat quadric_matrix(long long t) {
  const Int T = to_int(t);
  RatMat m(4, RatVec(4, Rat(0)));
  m[0][0] = Rat(3 * T * T);
  m[1][1] = Rat(-T);
  m[2][2] = Rat(3);
  m[3][3] = Rat(23);
  m[0][2] = m[2][0] = Rat(-T);
  m[0][3] = m[3][0] = Rat(5 * T);
  m[2][3] = m[3][2] = Rat(-5);
  return m;
}

Rat eval_form(const RatMat& m, const RatVec& a, const RatVec& b) {
  Rat acc(0);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) acc += a[i] * m[i][j] * b[j];
  }
  return acc;
}

// The fixedness system only imposes the h^2-row of iota* F = F; the other
// three rows must be consequences.  That is exactly the statement that
// iota* - id has rank 1 on the invariant H^4, which is checked here rather
// than assumed.
void verify_fixedness_rank(long long t, const Int& c, const Int& d) {
  const Int T = to_int(t);
  RatMat n = {
      {Rat(c * c - 1), Rat(c * d), Rat(d * d), Rat(0)},
      {Rat(-2 * c * T * d), Rat(-(c * c + T * d * d) - 1), Rat(-2 * c * d), Rat(0)},
      {Rat(T * T * d * d), Rat(T * c * d), Rat(c * c - 1), Rat(0)},
      {Rat(0), Rat(0), Rat(0), Rat(0)},
  };
  const auto sol = solve_general(n, RatVec(4, Rat(0)));
  if (sol.rank != 1) {
    throw invariant_error("fixedness equations do not collapse to one condition at t=" +
                          std::to_string(t));
  }
}

}  // namespace

std::optional<int> dim_h0_from_square(const Int& dfsq) {
  const Int num = dfsq + 56;
  if (!mpz_divisible_ui_p(num.get_mpz_t(), 16)) return std::nullopt;
  const Int q = num / 16;
  if (q < 0 || q > 6) return std::nullopt;
  return static_cast<int>(q.get_si());
}

FixedLocusReport solve_fixed_class(long long t) {
  const auto aut = picard::aut_result(t);
  if (!aut.nontrivial) {
    throw std::domain_error("no nontrivial automorphism at t=" + std::to_string(t));
  }
  const Int a = aut.neg->x;
  const Int b = aut.neg->y;
  const Int c = aut.unit->x;
  const Int d = aut.unit->y;
  const Int T = to_int(t);

  verify_fixedness_rank(t, c, d);

  FixedLocusReport report;
  report.t = t;
  const RatMat quad = quadric_matrix(t);
  std::vector<H4Class> admissible;

  for (const int v : {2, 6, 10}) {
    BranchRecord branch;
    branch.v = v;

    // Linear conditions on (x, y, z, w):
    //   t x - z + 5 w                                   = 0   (sigma)
    //   (1 - c^2) x - c d y - d^2 z                     = 0   (fixedness)
    //   (t + 2 t^2 b^2) x + 2abt y + (2a^2 - 1) z + 5 w = v   (pairing)
    RatMat lin = {
        {Rat(T), Rat(0), Rat(-1), Rat(5)},
        {Rat(1 - c * c), Rat(-c * d), Rat(-d * d), Rat(0)},
        {Rat(T + 2 * T * T * b * b), Rat(2 * a * b * T), Rat(2 * a * a - 1), Rat(5)},
    };
    RatVec rhs = {Rat(0), Rat(0), Rat(v)};
    const auto sol = solve_general(lin, rhs);
    if (!sol.consistent || sol.rank != 3 || sol.dirs.size() != 1) {
      throw invariant_error("fixed-locus linear system is degenerate at t=" +
                            std::to_string(t) + ", v=" + std::to_string(v));
    }
    const RatVec& dir = sol.dirs[0];
    if (dir[3] == 0) {
      throw invariant_error("fixed-locus line has constant q-vee coordinate at t=" +
                            std::to_string(t) + ", v=" + std::to_string(v));
    }
    branch.linear_rank_ok = true;

    // Reparametrize the line by its w-coordinate: P(w) = A + B w.
    RatVec B(4), A(4);
    for (int i = 0; i < 4; ++i) B[i] = dir[i] / dir[3];
    for (int i = 0; i < 4; ++i) A[i] = sol.base[i] - sol.base[3] * B[i];

    const Rat qa = eval_form(quad, B, B);
    const Rat qb = Rat(2) * eval_form(quad, A, B);
    const Rat qc = eval_form(quad, A, A) - Rat(48);
    const auto roots = solve_rational_quadratic(qa, qb, qc);

    if (roots.degenerate) {
      branch.rejections.push_back("restricted equation is not quadratic");
    }
    if (!roots.has_real) {
      branch.rejections.push_back("no real solutions on the line");
    } else if (!roots.rational) {
      branch.rejections.push_back("discriminant is not a perfect square");
    }
    branch.has_rational_roots = roots.rational && !roots.roots.empty();
    for (const Rat& w : roots.roots) {
      branch.roots.push_back(w);
      H4Class cand{t, {}};
      for (int i = 0; i < 4; ++i) cand.c[i] = A[i] + B[i] * w;
      if (cohomology::to_integral(cand)) {
        branch.integral_candidates.push_back(cand);
        admissible.push_back(cand);
      } else {
        branch.rejections.push_back("root w=" + rat_str(w) +
                                    " fails the integrality filter");
      }
    }
    report.branch_log.push_back(std::move(branch));
  }

  if (admissible.empty()) {
    throw invariant_error("no admissible fixed-locus class at t=" + std::to_string(t));
  }
  if (admissible.size() > 1) {
    throw invariant_error("fixed-locus class is not unique at t=" + std::to_string(t));
  }
  report.F = admissible.front();

  // Independent verification of the solved class.
  const NSClass D = *aut.witness;
  const H4Class dsq = cohomology::cup_h2(D, D);
  const H4Class qvee{t, {Rat(0), Rat(0), Rat(0), Rat(1)}};
  const H4Class closed_form = Rat(5) * dsq - qvee;
  if (!(report.F == closed_form)) {
    throw invariant_error("fixed-locus class differs from 5 D^2 - (2/5)q-vee at t=" +
                          std::to_string(t));
  }
  if (cohomology::pair_h4(report.F, report.F) != Rat(192)) {
    throw invariant_error("fixed-locus self-intersection is not 192 at t=" +
                          std::to_string(t));
  }
  const Rat fd2 = cohomology::pair_h4(report.F, dsq);
  if (fd2 != Rat(40)) {
    throw invariant_error("pairing <F, D^2> is not 40 at t=" + std::to_string(t));
  }
  if (cohomology::sigma_functional(report.F) != 0) {
    throw invariant_error("fixed-locus class is not sigma-isotropic at t=" +
                          std::to_string(t));
  }
  if (!(cohomology::iota_star_h4(report.F) == report.F)) {
    throw invariant_error("fixed-locus class is not iota-fixed at t=" +
                          std::to_string(t));
  }
  const auto dim = dim_h0_from_square(fd2.get_num());
  if (!dim) {
    throw invariant_error("section count undefined for <F, D^2> at t=" +
                          std::to_string(t));
  }
  report.dim_h0 = *dim;
  return report;
}

}  // namespace hilbsq::fixedlocus
