// Acceptance gate: one line per criterion, nonzero exit if any fails.
//
// Each criterion re-derives its expected values through an independent route
// (brute-force scans, the Chakravala method, the three-term pairing
// expansion, literal basis matrices) and compares the library against them.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hilbsq/report.hpp"
#include "oracles.hpp"

using namespace hilbsq;
using cohomology::H4Class;
using picard::NSClass;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    ok = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
};

template <typename T>
std::string str(const T& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Admissibility decided without the library's Pell solver: the negative
// equation through the Chakravala unit and its perfect-square identities,
// the degree-5 equation by a direct windowed scan.
bool oracle_admissible(long long t) {
  if (is_square(to_int(t))) return false;
  const auto unit = oracles::chakravala_unit(t);
  const Int& c = unit.first;
  const bool neg = Int(c - 1) % 2 == 0 && is_square(Int((c - 1) / 2)) &&
                   Int(c + 1) % (2 * to_int(t)) == 0 &&
                   is_square(Int((c + 1) / (2 * to_int(t))));
  if (!neg) return false;
  return !oracles::pell_solvable_brute_force(4 * t, 5);
}

Outcome criterion_survey_matches_oracle() {
  Outcome r;
  const auto res = report::survey(2, 200);
  std::vector<long long> lib;
  for (const auto& row : res.rows) lib.push_back(row.t);
  if (lib.size() < 3 || lib[0] != 2 || lib[1] != 10 || lib[2] != 13) {
    r.fail("first admissible degrees are not 2, 10, 13");
  }
  std::vector<long long> oracle;
  for (long long t = 2; t <= 200; ++t) {
    if (oracle_admissible(t)) oracle.push_back(t);
  }
  if (lib != oracle) {
    r.fail("admissible set disagrees with the brute-force scan");
  }
  return r;
}

Outcome criterion_solution_shape() {
  Outcome r;
  int admissible = 0;
  for (long long t = 2; t <= 10000; ++t) {
    const auto aut = picard::aut_result(t);
    if (!aut.nontrivial) continue;
    ++admissible;
    const Int& a = aut.neg->x;
    const Int& b = aut.neg->y;
    if (b % 2 == 0) {
      r.fail("even b at t=" + std::to_string(t));
      break;
    }
    if (aut.unit->x != a * a + to_int(t) * b * b ||
        aut.unit->y != 2 * a * b) {
      r.fail("unit is not the square of the negative solution at t=" +
             std::to_string(t));
      break;
    }
  }
  if (admissible == 0) r.fail("no admissible degrees found at all");
  return r;
}

Outcome criterion_gram() {
  Outcome r;
  // Integral basis in rational coordinates, written out literally.
  const RatMat basis = {{Rat(1), make_rat(1, 2), Rat(0), Rat(0)},
                        {Rat(0), make_rat(-1, 2), Rat(0), Rat(0)},
                        {Rat(0), Rat(0), make_rat(1, 8), Rat(0)},
                        {Rat(0), Rat(0), make_rat(1, 8), Rat(1)}};
  for (long long t = 2; t <= 200; ++t) {
    const auto g = cohomology::gram_h22(t);
    const Int tt = to_int(t);

    // Assemble the integral gram from the three-term product expansion,
    // transported through the literal basis matrix.
    const RatMat products = oracles::h4_gram_from_products(t);
    RatMat expected(4, RatVec(4, Rat(0)));
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        Rat sum = 0;
        for (int k = 0; k < 4; ++k) {
          for (int l = 0; l < 4; ++l) {
            sum += basis[k][i] * products[k][l] * basis[l][j];
          }
        }
        expected[i][j] = sum;
      }
    }
    RatMat actual(4, RatVec(4));
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) actual[i][j] = Rat(g.m[i][j]);
    }
    if (actual != expected) {
      r.fail("gram matrix deviates from the product expansion at t=" +
             std::to_string(t));
      break;
    }
    const Rat dd = det(actual);
    if (dd != Rat(Int(-84) * tt * tt * tt) || g.discriminant != dd.get_num()) {
      r.fail("determinant is not -84 t^3 at t=" + std::to_string(t));
      break;
    }
  }
  // The exotic self-pairing, straight from <q, q> = 575 scaled by (2/5)^2.
  if (make_rat(4, 25) * Rat(575) != Rat(92) ||
      cohomology::gram_h22(2).m[3][3] != 92) {
    r.fail("exotic class self-pairing is not 92");
  }
  return r;
}

Outcome criterion_fixed_class() {
  Outcome r;
  for (long long t = 2; t <= 500; ++t) {
    const auto aut = picard::aut_result(t);
    if (!aut.nontrivial) continue;
    const auto rep = fixedlocus::solve_fixed_class(t);
    const Int& a = aut.witness->yd;
    const Int& b = aut.witness->xh;
    const H4Class expected{
        t, {Rat(5 * b * b), Rat(-10 * a * b), Rat(5 * a * a), Rat(-1)}};
    const H4Class dsq = cohomology::cup_h2(*aut.witness, *aut.witness);
    H4Class five_dsq_minus_q = Rat(5) * dsq;
    five_dsq_minus_q.c[3] -= 1;
    if (!(rep.F == expected) || !(rep.F == five_dsq_minus_q)) {
      r.fail("fixed class is not 5 D^2 - (2/5)q at t=" + std::to_string(t));
      break;
    }
    if (cohomology::pair_h4(rep.F, rep.F) != Rat(192) ||
        cohomology::pair_h4(rep.F, dsq) != Rat(40) ||
        cohomology::sigma_functional(rep.F) != Rat(0) ||
        !(cohomology::iota_star_h4(rep.F) == rep.F) || rep.dim_h0 != 6) {
      r.fail("fixed class invariants fail at t=" + std::to_string(t));
      break;
    }
    if (rep.branch_log.size() != 3 || rep.branch_log[0].has_rational_roots ||
        rep.branch_log[1].has_rational_roots ||
        !rep.branch_log[2].has_rational_roots ||
        rep.branch_log[2].integral_candidates.size() != 1) {
      r.fail("branch filtering deviates at t=" + std::to_string(t));
      break;
    }
    auto roots = rep.branch_log[2].roots;
    std::sort(roots.begin(), roots.end());
    if (roots != std::vector<Rat>{make_rat(-13, 12), Rat(-1)}) {
      r.fail("unexpected branch roots at t=" + std::to_string(t));
      break;
    }
  }
  return r;
}

Outcome criterion_decompositions() {
  Outcome r;
  const auto ws = irreducibility::search_decompositions(2);
  if (ws.size() != 2) {
    r.fail("t=2 does not yield exactly two candidates");
    return r;
  }
  const std::array<Int, 4> w0{Int(0), Int(1), Int(-2), Int(0)};
  const std::array<Int, 4> w1{Int(-1), Int(3), Int(10), Int(-1)};
  if (ws[0].A.a != w0 || ws[1].A.a != w1) {
    r.fail("t=2 candidates are not (0,1,-2,0) and (-1,3,10,-1)");
  }
  const auto sch = irreducibility::schubert_classes(2);
  const auto a11 = cohomology::to_integral(sch.sigma11);
  const auto a2 = cohomology::to_integral(sch.sigma2);
  if (!a11 || !a2 || ws[0].A.a != a11->a || ws[1].A.a != a2->a) {
    r.fail("t=2 candidates are not the Schubert classes");
  }
  for (long long t = 10; t <= 500; ++t) {
    if (!picard::aut_result(t).nontrivial) continue;
    if (!irreducibility::search_decompositions(t).empty()) {
      r.fail("unexpected decomposition at t=" + std::to_string(t));
      break;
    }
    const auto v = irreducibility::swap_system_check(t);
    if (!v.swap_excluded || !v.surviving_candidates.empty()) {
      r.fail("swap split not excluded at t=" + std::to_string(t));
      break;
    }
  }
  return r;
}

Outcome criterion_schubert() {
  Outcome r;
  const auto sch = irreducibility::schubert_classes(2);
  if (cohomology::pair_h4(sch.sigma11, sch.sigma11) != Rat(6) ||
      cohomology::pair_h4(sch.sigma2, sch.sigma2) != Rat(6) ||
      cohomology::pair_h4(sch.sigma11, sch.sigma2) != Rat(0)) {
    r.fail("schubert pairings are not (6, 6, 0)");
  }
  const H4Class combo = Rat(28) * sch.sigma11 + Rat(12) * sch.sigma2;
  if (!(combo == sch.bitangent) ||
      !(sch.bitangent == H4Class{2, {Rat(20), Rat(-32), Rat(8), Rat(-4)}})) {
    r.fail("bitangent class is not 28 sigma_{1,1} + 12 sigma_2");
  }
  if (!cohomology::to_integral(sch.sigma11) ||
      !cohomology::to_integral(sch.sigma2)) {
    r.fail("schubert classes are not integral");
  }
  const auto aut = picard::aut_result(2);
  const H4Class dsq = cohomology::cup_h2(*aut.witness, *aut.witness);
  if (!(sch.sigma11 + sch.sigma2 == dsq)) {
    r.fail("schubert classes do not sum to D^2");
  }
  return r;
}

Outcome criterion_h6() {
  Outcome r;
  for (long long t = 2; t <= 500; ++t) {
    const auto aut = picard::aut_result(t);
    if (!aut.nontrivial) continue;
    const NSClass D = *aut.witness;
    const Int& b = D.xh;
    const Int& a = D.yd;
    const auto d3 = cohomology::h6_integral(
        cohomology::reduce_to_h6(cohomology::cup_h2(D, D), D));
    if (!d3 || d3->first != 6 * b || d3->second != -12 * a) {
      r.fail("D^3 expansion fails at t=" + std::to_string(t));
      break;
    }
    // The four reduction relations: delta^3, h delta^2, and the two
    // products with the exotic class.
    const NSClass hc = picard::h_class(t);
    const NSClass dc = picard::delta_class(t);
    const H4Class deltasq = cohomology::cup_h2(dc, dc);
    const H4Class qclass{t, {Rat(0), Rat(0), Rat(0), Rat(1)}};
    const auto del3 = cohomology::reduce_to_h6(deltasq, dc);
    const auto hdel2 = cohomology::reduce_to_h6(deltasq, hc);
    const auto qh = cohomology::reduce_to_h6(qclass, hc);
    const auto qdel = cohomology::reduce_to_h6(qclass, dc);
    if (del3.u != Rat(0) || del3.v != make_rat(-3, to_int(t)) ||
        hdel2.u != make_rat(-1, to_int(3 * t)) || hdel2.v != Rat(0) ||
        qh.u != make_rat(5, to_int(3 * t)) || qh.v != Rat(0) ||
        qdel.u != Rat(0) || qdel.v != make_rat(5, to_int(t))) {
      r.fail("H^6 reduction relations fail at t=" + std::to_string(t));
      break;
    }
    if (cohomology::dual_pairing(D) != Rat(2) ||
        cohomology::dual_pairing(picard::h_class(t)) != Rat(to_int(2 * t)) ||
        cohomology::dual_pairing(picard::delta_class(t)) != Rat(-1)) {
      r.fail("dual pairing fails at t=" + std::to_string(t));
      break;
    }
    if (cohomology::fujiki_quartic(D) != 12) {
      r.fail("fujiki value of D is not 12 at t=" + std::to_string(t));
      break;
    }
    // Spot-check the reduction against the pairing oracle.
    const H4Class dsq = cohomology::cup_h2(D, D);
    const auto [u, v] = oracles::h6_reduce_by_pairing(dsq, D);
    const auto lib = cohomology::reduce_to_h6(dsq, D);
    if (lib.u != u || lib.v != v) {
      r.fail("H^6 reduction disagrees with the pairing oracle at t=" +
             std::to_string(t));
      break;
    }
  }
  return r;
}

Outcome criterion_obstructions() {
  Outcome r;
  for (long long t = 2; t <= 500; ++t) {
    if (!picard::aut_result(t).nontrivial) continue;
    const auto o = irreducibility::prime_divisor_obstructions(t);
    if (!o.all_pass()) {
      r.fail("obstruction fails at t=" + std::to_string(t));
      break;
    }
    if (o.used_cone_branch != (t == 2)) {
      r.fail("wrong obstruction branch at t=" + std::to_string(t));
      break;
    }
    if (t != 2 && pell::is_solvable(t, 2)) {
      r.fail("x^2 - t y^2 = 2 unexpectedly solvable at t=" +
             std::to_string(t));
      break;
    }
  }
  return r;
}

Outcome criterion_oracles() {
  Outcome r;
  for (long long t : {2LL, 10LL}) {
    const auto box = oracles::box_decomposition_search(t, 48);
    auto lib = irreducibility::search_decompositions(t);
    std::sort(lib.begin(), lib.end(),
              [](const auto& x, const auto& y) { return x.A.a < y.A.a; });
    bool same = box.size() == lib.size();
    for (size_t i = 0; same && i < box.size(); ++i) {
      same = box[i].first.a == lib[i].A.a && box[i].second.a == lib[i].B.a;
    }
    if (!same) {
      r.fail("box enumeration disagrees with the search at t=" +
             std::to_string(t));
    }
  }
  for (long long d = 2; d <= 50 && r.ok; ++d) {
    if (is_square(to_int(d))) continue;
    const auto unit = pell::fundamental_unit(d);
    for (long long n = -30; n <= 30; ++n) {
      if (n == 0) continue;
      const auto brute =
          oracles::pell_classes_brute_force(d, n, {unit.x, unit.y});
      const auto lib = pell::solve_pell_type(d, n);
      std::vector<std::pair<Int, Int>> a, b;
      for (const auto& cls : lib.fundamentals) {
        a.emplace_back(cls.sign * cls.fundamental.x, cls.fundamental.y);
      }
      for (const auto& cls : brute) b.emplace_back(cls.x, cls.y);
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a != b) {
        r.fail("solution classes disagree at d=" + std::to_string(d) +
               ", n=" + std::to_string(n));
        break;
      }
    }
  }
  return r;
}

struct Criterion {
  const char* name;
  double limit_seconds;  // 0 = no individual limit
  Outcome (*fn)();
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"survey up to 200 matches the independent Pell scan", 5.0,
       criterion_survey_matches_oracle},
      {"negative solutions have odd b and square to the unit, t <= 10000",
       30.0, criterion_solution_shape},
      {"gram matrices, determinant -84 t^3, exotic pairing 92, t <= 200", 0.0,
       criterion_gram},
      {"fixed class formula, invariants and branch roots, t <= 500", 60.0,
       criterion_fixed_class},
      {"two candidates at t = 2, none for 10 <= t <= 500", 120.0,
       criterion_decompositions},
      {"schubert identities at t = 2", 0.0, criterion_schubert},
      {"H^6 calculus, dual pairing and fujiki values, t <= 500", 0.0,
       criterion_h6},
      {"degree-two obstruction and slope inequality, t <= 500", 0.0,
       criterion_obstructions},
      {"search and Pell classes agree with brute-force oracles", 0.0,
       criterion_oracles},
  };

  int failures = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.fn();
    } catch (const std::exception& e) {
      out.fail(std::string("exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (c.limit_seconds > 0 && elapsed >= c.limit_seconds) {
      out.fail("exceeded " + str(c.limit_seconds) + "s");
    }
    std::printf("[%s] %d. %s (%.2fs%s%s)\n", out.ok ? "PASS" : "FAIL", index,
                c.name, elapsed,
                c.limit_seconds > 0 ? (", limit " + str(c.limit_seconds) + "s").c_str()
                                    : "",
                out.detail.empty() ? "" : ("; " + out.detail).c_str());
    if (!out.ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
