#include "hilbsq/report.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace hilbsq::report {

using nlohmann::json;
using cohomology::H4Class;
using cohomology::H4IntegralCoords;
using irreducibility::ConstraintChecks;
using irreducibility::DecompositionWitness;
using picard::NSClass;

namespace {

// ---------------------------------------------------------------------------
// serialization primitives

json j_int(const Int& v) { return v.get_str(); }

Int parse_int(const json& j) { return Int(j.get<std::string>()); }

json j_rat(const Rat& v) { return rat_str(v); }

Rat parse_rat(const json& j) {
  Rat q(j.get<std::string>());
  q.canonicalize();
  return q;
}

template <std::size_t N>
json j_ints(const std::array<Int, N>& a) {
  json out = json::array();
  for (const auto& v : a) out.push_back(j_int(v));
  return out;
}

template <std::size_t N>
std::array<Int, N> parse_ints(const json& j) {
  std::array<Int, N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = parse_int(j.at(i));
  return out;
}

template <std::size_t N>
json j_rats(const std::array<Rat, N>& a) {
  json out = json::array();
  for (const auto& v : a) out.push_back(j_rat(v));
  return out;
}

template <std::size_t N>
std::array<Rat, N> parse_rats(const json& j) {
  std::array<Rat, N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = parse_rat(j.at(i));
  return out;
}

// Compact rational for human-readable text: "3", "-13/12".
std::string rat_compact(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return rat_str(q);
}

// ---------------------------------------------------------------------------
// pretty-printing of classes

std::string h4_display(const H4Class& e) {
  static const char* kNames[4] = {"h^2", "h.delta", "delta^2", "(2/5)q^vee"};
  std::string out;
  for (int i = 0; i < 4; ++i) {
    const Rat& coeff = e.c[i];
    if (coeff == 0) continue;
    const bool neg = coeff < 0;
    const Rat mag = neg ? Rat(-coeff) : coeff;
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    if (mag != 1) out += rat_compact(mag) + "*";
    out += kNames[i];
  }
  return out.empty() ? "0" : out;
}

}  // namespace

std::string ns_display(const NSClass& c) {
  std::string out;
  if (c.xh != 0) {
    if (c.xh == 1) {
      out += "h";
    } else if (c.xh == -1) {
      out += "-h";
    } else {
      out += c.xh.get_str() + "*h";
    }
  }
  if (c.yd != 0) {
    const bool neg = c.yd < 0;  // class is xh*h - yd*delta
    const Int mag = abs(c.yd);
    if (out.empty()) {
      if (!neg) out += "-";
    } else {
      out += neg ? " + " : " - ";
    }
    if (mag == 1) {
      out += "delta";
    } else {
      out += mag.get_str() + "*delta";
    }
  }
  return out.empty() ? "0" : out;
}

NSClass ns_parse(long long t, const std::string& s) {
  NSClass c{t, Int(0), Int(0)};
  if (s == "0") return c;
  std::string norm;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.compare(i, 3, " - ") == 0) {
      norm += " + -";
      i += 2;
    } else {
      norm += s[i];
    }
  }
  std::size_t pos = 0;
  while (pos < norm.size()) {
    const std::size_t next = norm.find(" + ", pos);
    std::string term = norm.substr(
        pos, next == std::string::npos ? std::string::npos : next - pos);
    pos = next == std::string::npos ? norm.size() : next + 3;
    int sign = 1;
    if (!term.empty() && term[0] == '-') {
      sign = -1;
      term.erase(0, 1);
    }
    Int coeff(1);
    if (const auto star = term.find('*'); star != std::string::npos) {
      coeff = Int(term.substr(0, star));
      term.erase(0, star + 1);
    }
    coeff *= sign;
    if (term == "h") {
      c.xh = coeff;
    } else if (term == "delta") {
      c.yd = -coeff;
    } else {
      throw std::invalid_argument("cannot parse divisor class term '" + term + "'");
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// named checks

namespace {

void add_check(AnalysisReport& r, const std::string& name, bool pass) {
  r.checks.push_back(NamedCheck{name, pass});
}

// Checks meaningful for every t >= 2: Pell identities on whatever solutions
// exist, cone slope ordering, and the integral Gram matrix against the
// Poincare pairing.
void add_common_checks(AnalysisReport& r) {
  const long long t = r.t;
  if (r.aut.neg) {
    const Int& a = r.aut.neg->x;
    const Int& b = r.aut.neg->y;
    add_check(r, "negative_pell_equation", a * a - to_int(t) * b * b == -1);
  }
  if (r.aut.unit) {
    const Int& c = r.aut.unit->x;
    const Int& d = r.aut.unit->y;
    add_check(r, "unit_equation", c * c - to_int(t) * d * d == 1);
  }
  add_check(r, "cone_slope_order",
            r.cones.mu > 0 && r.cones.mu <= r.cones.omega &&
                r.cones.nu <= r.cones.mu);

  // Integral basis {h^2, (h^2 - h.delta)/2, (delta^2 + (2/5)q^vee)/8,
  // (2/5)q^vee} written in rational coordinates.
  const std::array<H4Class, 4> basis = {
      H4Class{t, {Rat(1), Rat(0), Rat(0), Rat(0)}},
      H4Class{t, {Rat(1, 2), Rat(-1, 2), Rat(0), Rat(0)}},
      H4Class{t, {Rat(0), Rat(0), Rat(1, 8), Rat(1, 8)}},
      H4Class{t, {Rat(0), Rat(0), Rat(0), Rat(1)}}};
  const auto gram = cohomology::gram_h22(t);
  bool gram_ok = true;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (Rat(gram.m[i][j]) != cohomology::pair_h4(basis[i], basis[j])) {
        gram_ok = false;
      }
    }
  }
  add_check(r, "gram_matches_pairing", gram_ok);
  const Int tt = to_int(t);
  add_check(r, "gram_discriminant", gram.discriminant == Int(-84) * tt * tt * tt);
}

void add_admissible_checks(AnalysisReport& r) {
  const long long t = r.t;
  const Int& a = r.aut.neg->x;
  const Int& b = r.aut.neg->y;
  const Int& c = r.aut.unit->x;
  const Int& d = r.aut.unit->y;
  const NSClass D = *r.aut.witness;

  add_check(r, "negative_pell_parity", mpz_odd_p(b.get_mpz_t()) != 0);
  add_check(r, "unit_is_square_of_negative",
            c == a * a + to_int(t) * b * b && d == 2 * a * b);
  add_check(r, "polarisation_witness",
            picard::bbf_q(D) == 2 && picard::is_ample(D) &&
                picard::divisibility(D) == 1);

  const auto& iota = *r.involution;
  const NSClass h = picard::h_class(t);
  const NSClass del = picard::delta_class(t);
  const bool involutive = iota.apply(iota.apply(h)) == h &&
                          iota.apply(iota.apply(del)) == del &&
                          picard::bbf_q(iota.apply(h)) == picard::bbf_q(h) &&
                          picard::bbf_pair(iota.apply(h), iota.apply(del)) ==
                              picard::bbf_pair(h, del) &&
                          iota.apply(D) == D;
  add_check(r, "involution_involutive", involutive);

  const H4Class dsq = cohomology::cup_h2(D, D);
  const H4Class qvee{t, {Rat(0), Rat(0), Rat(0), Rat(1)}};
  const H4Class& F = r.fixed->F;
  add_check(r, "fixed_class_formula", F == Rat(5) * dsq - qvee);
  add_check(r, "fixed_class_invariants",
            cohomology::pair_h4(F, F) == 192 &&
                cohomology::pair_h4(F, dsq) == 40 &&
                cohomology::sigma_functional(F) == 0 &&
                cohomology::iota_star_h4(F) == F && r.fixed->dim_h0 == 6 &&
                cohomology::to_integral(F).has_value());

  bool branches_ok = r.fixed->branch_log.size() == 3;
  std::size_t total_candidates = 0;
  for (const auto& branch : r.fixed->branch_log) {
    total_candidates += branch.integral_candidates.size();
    if (branch.v == 10) {
      const bool roots_ok =
          branch.roots.size() == 2 &&
          std::count(branch.roots.begin(), branch.roots.end(), Rat(-1)) == 1 &&
          std::count(branch.roots.begin(), branch.roots.end(), Rat(-13, 12)) == 1;
      branches_ok = branches_ok && branch.has_rational_roots && roots_ok;
    } else {
      branches_ok = branches_ok && !branch.has_rational_roots;
    }
  }
  add_check(r, "fixed_branch_filtering", branches_ok && total_candidates == 1);

  const auto d_cubed = cohomology::h6_integral(cohomology::reduce_to_h6(dsq, D));
  add_check(r, "h6_calculus",
            cohomology::dual_pairing(D) == 2 &&
                cohomology::fujiki_quartic(D) == 12 &&
                cohomology::sigma_functional(dsq) == 2 &&
                cohomology::pair_h4(dsq, dsq) == 12 && d_cubed.has_value() &&
                d_cubed->first == 6 * b && d_cubed->second == -12 * a);

  add_check(r, "swap_split_excluded",
            r.swap_verdict->swap_excluded &&
                r.swap_verdict->surviving_candidates.empty());
  add_check(r, "degree_two_obstruction", r.obstructions->degree_two_obstructed);
  add_check(r, "slope_inequality", r.obstructions->slope_inequality_holds);
  add_check(r, "no_isotropic_classes", r.obstructions->no_isotropic_classes);

  bool search_ok;
  if (t == 2) {
    search_ok = r.witnesses.size() == 2;
    for (const auto& w : r.witnesses) {
      search_ok = search_ok &&
                  cohomology::from_integral(w.A) + cohomology::from_integral(w.B) ==
                      dsq &&
                  w.checks_a.all_hold() && w.checks_b.all_hold();
    }
  } else {
    search_ok = r.witnesses.empty();
  }
  add_check(r, "decomposition_search", search_ok);

  if (t == 2) {
    const auto& sch = *r.schubert;
    const auto s11 = cohomology::to_integral(sch.sigma11);
    const auto s2 = cohomology::to_integral(sch.sigma2);
    bool ok = s11 && s2 && r.witnesses.size() == 2;
    if (ok) {
      const H4Class bitangent_expected{
          t, {Rat(20), Rat(-32), Rat(8), Rat(-4)}};
      ok = s11->a == r.witnesses[0].A.a && s2->a == r.witnesses[1].A.a &&
           sch.bitangent == bitangent_expected &&
           Rat(28) * sch.sigma11 + Rat(12) * sch.sigma2 == sch.bitangent &&
           cohomology::pair_h4(sch.sigma11, sch.sigma11) == 6 &&
           cohomology::pair_h4(sch.sigma2, sch.sigma2) == 6 &&
           cohomology::pair_h4(sch.sigma11, sch.sigma2) == 0;
    }
    add_check(r, "schubert_identification", ok);
  }
}

}  // namespace

int AnalysisReport::checks_passed() const {
  int n = 0;
  for (const auto& c : checks) n += c.pass ? 1 : 0;
  return n;
}

bool AnalysisReport::all_checks_pass() const {
  return checks_passed() == static_cast<int>(checks.size());
}

bool AnalysisReport::irreducible() const {
  return admissible() && swap_verdict->swap_excluded &&
         obstructions->all_pass() && witnesses.empty();
}

AnalysisReport analyze(long long t, const AnalyzeOptions& opts) {
  if (t < 2) {
    throw std::domain_error("analysis needs t >= 2, got " + std::to_string(t));
  }
  AnalysisReport r;
  r.t = t;
  r.aut = picard::aut_result(t);
  r.cones = picard::cone_slopes(t);
  if (r.aut.nontrivial) {
    r.involution = picard::involution_matrix(t);
    r.fixed = fixedlocus::solve_fixed_class(t);
    r.swap_verdict = irreducibility::swap_system_check(t);
    r.obstructions = irreducibility::prime_divisor_obstructions(t);
    r.witnesses = irreducibility::search_decompositions(t, opts.full_range);
    if (t == 2) r.schubert = irreducibility::schubert_classes(t);
  }
  add_common_checks(r);
  if (r.aut.nontrivial) add_admissible_checks(r);
  return r;
}

// ---------------------------------------------------------------------------
// equality

namespace {

template <typename T>
bool eq_opt(const std::optional<T>& a, const std::optional<T>& b);

bool eq(const pell::PellSolution& a, const pell::PellSolution& b) {
  return a.x == b.x && a.y == b.y && a.d == b.d && a.n == b.n;
}

bool eq(const NSClass& a, const NSClass& b) { return a == b; }

bool eq(const picard::AutResult& a, const picard::AutResult& b) {
  return a.t == b.t && a.nontrivial == b.nontrivial &&
         a.t_is_square == b.t_is_square &&
         a.pell_4t_5_solvable == b.pell_4t_5_solvable &&
         a.neg_pell_solvable == b.neg_pell_solvable && eq_opt(a.neg, b.neg) &&
         eq_opt(a.unit, b.unit) && eq_opt(a.witness, b.witness);
}

bool eq(const picard::ConeSlopes& a, const picard::ConeSlopes& b) {
  return a.t == b.t && a.mu == b.mu && a.nu == b.nu && a.omega == b.omega;
}

bool eq(const picard::InvolutionMatrix& a, const picard::InvolutionMatrix& b) {
  return a.t == b.t && a.m == b.m;
}

bool eq(const fixedlocus::BranchRecord& a, const fixedlocus::BranchRecord& b) {
  if (a.v != b.v || a.linear_rank_ok != b.linear_rank_ok ||
      a.has_rational_roots != b.has_rational_roots || a.roots != b.roots ||
      a.rejections != b.rejections ||
      a.integral_candidates.size() != b.integral_candidates.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.integral_candidates.size(); ++i) {
    if (!(a.integral_candidates[i] == b.integral_candidates[i])) return false;
  }
  return true;
}

bool eq(const fixedlocus::FixedLocusReport& a,
        const fixedlocus::FixedLocusReport& b) {
  if (a.t != b.t || !(a.F == b.F) || a.dim_h0 != b.dim_h0 ||
      a.branch_log.size() != b.branch_log.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.branch_log.size(); ++i) {
    if (!eq(a.branch_log[i], b.branch_log[i])) return false;
  }
  return true;
}

bool eq(const H4IntegralCoords& a, const H4IntegralCoords& b) {
  return a.t == b.t && a.a == b.a;
}

bool eq(const irreducibility::SwapVerdict& a,
        const irreducibility::SwapVerdict& b) {
  if (a.t != b.t || a.swap_excluded != b.swap_excluded ||
      a.line_has_integral_points != b.line_has_integral_points ||
      a.witness != b.witness || a.direction != b.direction ||
      a.witness_x_integral != b.witness_x_integral ||
      a.witness_w_integral != b.witness_w_integral ||
      a.surviving_candidates.size() != b.surviving_candidates.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.surviving_candidates.size(); ++i) {
    if (!eq(a.surviving_candidates[i], b.surviving_candidates[i])) return false;
  }
  return true;
}

bool eq(const irreducibility::ObstructionVerdict& a,
        const irreducibility::ObstructionVerdict& b) {
  return a.t == b.t && a.degree_two_obstructed == b.degree_two_obstructed &&
         a.used_cone_branch == b.used_cone_branch &&
         a.slope_inequality_holds == b.slope_inequality_holds &&
         a.no_isotropic_classes == b.no_isotropic_classes;
}

bool eq(const ConstraintChecks& a, const ConstraintChecks& b) {
  return a.h2_degree == b.h2_degree && a.h2_degree_max == b.h2_degree_max &&
         a.sigma == b.sigma && a.d2_pairing == b.d2_pairing &&
         a.iota_fixed == b.iota_fixed;
}

bool eq(const DecompositionWitness& a, const DecompositionWitness& b) {
  return a.t == b.t && eq(a.A, b.A) && eq(a.B, b.B) &&
         eq(a.checks_a, b.checks_a) && eq(a.checks_b, b.checks_b);
}

bool eq(const irreducibility::SchubertClasses& a,
        const irreducibility::SchubertClasses& b) {
  return a.sigma11 == b.sigma11 && a.sigma2 == b.sigma2 &&
         a.bitangent == b.bitangent;
}

template <typename T>
bool eq_opt(const std::optional<T>& a, const std::optional<T>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || eq(*a, *b);
}

}  // namespace

bool operator==(const AnalysisReport& a, const AnalysisReport& b) {
  if (a.t != b.t || !eq(a.aut, b.aut) || !eq(a.cones, b.cones) ||
      !eq_opt(a.involution, b.involution) || !eq_opt(a.fixed, b.fixed) ||
      !eq_opt(a.swap_verdict, b.swap_verdict) ||
      !eq_opt(a.obstructions, b.obstructions) ||
      !eq_opt(a.schubert, b.schubert) ||
      a.witnesses.size() != b.witnesses.size() ||
      a.checks.size() != b.checks.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.witnesses.size(); ++i) {
    if (!eq(a.witnesses[i], b.witnesses[i])) return false;
  }
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    if (a.checks[i].name != b.checks[i].name ||
        a.checks[i].pass != b.checks[i].pass) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// JSON rendering

namespace {

json h4_json(const H4Class& e) { return j_rats<4>(e.c); }

H4Class h4_from_json(long long t, const json& j) {
  return H4Class{t, parse_rats<4>(j)};
}

json alpha_json(const H4IntegralCoords& a) { return j_ints<4>(a.a); }

H4IntegralCoords alpha_from_json(long long t, const json& j) {
  return H4IntegralCoords{t, parse_ints<4>(j)};
}

json constraint_json(const ConstraintChecks& c) {
  return json{{"h2_degree", j_int(c.h2_degree)},
              {"h2_degree_max", j_int(c.h2_degree_max)},
              {"sigma", j_int(c.sigma)},
              {"d2_pairing", j_int(c.d2_pairing)},
              {"iota_fixed", c.iota_fixed}};
}

ConstraintChecks constraint_from_json(const json& j) {
  ConstraintChecks c;
  c.h2_degree = parse_int(j.at("h2_degree"));
  c.h2_degree_max = parse_int(j.at("h2_degree_max"));
  c.sigma = parse_int(j.at("sigma"));
  c.d2_pairing = parse_int(j.at("d2_pairing"));
  c.iota_fixed = j.at("iota_fixed").get<bool>();
  return c;
}

}  // namespace

json to_json(const AnalysisReport& r) {
  json pell_block;
  pell_block["t_is_square"] = r.aut.t_is_square;
  pell_block["pell_4t_5_solvable"] = r.aut.pell_4t_5_solvable;
  pell_block["negative"] =
      r.aut.neg ? json{{"a", j_int(r.aut.neg->x)}, {"b", j_int(r.aut.neg->y)}}
                : json(nullptr);
  pell_block["unit"] =
      r.aut.unit ? json{{"c", j_int(r.aut.unit->x)}, {"d", j_int(r.aut.unit->y)}}
                 : json(nullptr);

  json out;
  out["t"] = r.t;
  out["pell"] = pell_block;
  out["cones"] = json{{"mu", j_rat(r.cones.mu)},
                      {"nu", j_rat(r.cones.nu)},
                      {"omega", j_rat(r.cones.omega)}};
  out["aut"] = r.aut.nontrivial;
  if (r.involution) {
    const auto& m = r.involution->m;
    out["involution"] = json::array({json::array({j_int(m[0][0]), j_int(m[0][1])}),
                                     json::array({j_int(m[1][0]), j_int(m[1][1])})});
  } else {
    out["involution"] = nullptr;
  }
  out["D"] = r.aut.witness ? json(ns_display(*r.aut.witness)) : json(nullptr);

  if (r.fixed) {
    json branches = json::array();
    for (const auto& br : r.fixed->branch_log) {
      json roots = json::array();
      for (const auto& w : br.roots) roots.push_back(j_rat(w));
      json cands = json::array();
      for (const auto& cand : br.integral_candidates) cands.push_back(h4_json(cand));
      branches.push_back(json{{"v", br.v},
                              {"linear_rank_ok", br.linear_rank_ok},
                              {"has_rational_roots", br.has_rational_roots},
                              {"roots", roots},
                              {"integral_candidates", cands},
                              {"rejections", br.rejections}});
    }
    const auto alpha = cohomology::to_integral(r.fixed->F);
    out["F"] = json{{"coords", h4_json(r.fixed->F)},
                    {"alpha", alpha ? alpha_json(*alpha) : json(nullptr)},
                    {"dim_h0", r.fixed->dim_h0},
                    {"branches", branches}};
  } else {
    out["F"] = nullptr;
  }

  if (r.admissible()) {
    const auto& sv = *r.swap_verdict;
    json survivors = json::array();
    for (const auto& s : sv.surviving_candidates) survivors.push_back(alpha_json(s));
    json swap_block{{"excluded", sv.swap_excluded},
                    {"line_has_integral_points", sv.line_has_integral_points},
                    {"witness", j_rats<4>(sv.witness)},
                    {"direction", j_ints<4>(sv.direction)},
                    {"witness_x_integral", sv.witness_x_integral},
                    {"witness_w_integral", sv.witness_w_integral},
                    {"survivors", survivors}};
    const auto& ob = *r.obstructions;
    json obstruction_block{{"degree_two_obstructed", ob.degree_two_obstructed},
                           {"used_cone_branch", ob.used_cone_branch},
                           {"slope_inequality_holds", ob.slope_inequality_holds},
                           {"no_isotropic_classes", ob.no_isotropic_classes}};
    json witness_list = json::array();
    for (const auto& w : r.witnesses) {
      witness_list.push_back(json{{"A", alpha_json(w.A)},
                                  {"B", alpha_json(w.B)},
                                  {"checks_a", constraint_json(w.checks_a)},
                                  {"checks_b", constraint_json(w.checks_b)}});
    }
    json irr{{"swap", swap_block},
             {"obstructions", obstruction_block},
             {"witnesses", witness_list}};
    if (r.schubert) {
      irr["schubert"] = json{{"sigma11", h4_json(r.schubert->sigma11)},
                             {"sigma2", h4_json(r.schubert->sigma2)},
                             {"bitangent", h4_json(r.schubert->bitangent)}};
    } else {
      irr["schubert"] = nullptr;
    }
    out["irreducibility"] = irr;
  } else {
    out["irreducibility"] = nullptr;
  }

  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back(json{{"name", c.name}, {"pass", c.pass}});
  }
  out["checks"] = checks;
  return out;
}

AnalysisReport report_from_json(const json& j) {
  AnalysisReport r;
  r.t = j.at("t").get<long long>();
  const long long t = r.t;

  const json& pell_block = j.at("pell");
  r.aut.t = t;
  r.aut.t_is_square = pell_block.at("t_is_square").get<bool>();
  r.aut.pell_4t_5_solvable = pell_block.at("pell_4t_5_solvable").get<bool>();
  if (!pell_block.at("negative").is_null()) {
    pell::PellSolution neg;
    neg.x = parse_int(pell_block.at("negative").at("a"));
    neg.y = parse_int(pell_block.at("negative").at("b"));
    neg.d = t;
    neg.n = -1;
    r.aut.neg = neg;
  }
  r.aut.neg_pell_solvable = r.aut.neg.has_value();
  if (!pell_block.at("unit").is_null()) {
    pell::PellSolution unit;
    unit.x = parse_int(pell_block.at("unit").at("c"));
    unit.y = parse_int(pell_block.at("unit").at("d"));
    unit.d = t;
    unit.n = 1;
    r.aut.unit = unit;
  }
  r.aut.nontrivial = j.at("aut").get<bool>();
  if (!j.at("D").is_null()) {
    r.aut.witness = ns_parse(t, j.at("D").get<std::string>());
  }

  r.cones.t = t;
  r.cones.mu = parse_rat(j.at("cones").at("mu"));
  r.cones.nu = parse_rat(j.at("cones").at("nu"));
  r.cones.omega = parse_rat(j.at("cones").at("omega"));

  if (!j.at("involution").is_null()) {
    picard::InvolutionMatrix iota;
    iota.t = t;
    const json& m = j.at("involution");
    for (int i = 0; i < 2; ++i) {
      for (int k = 0; k < 2; ++k) iota.m[i][k] = parse_int(m.at(i).at(k));
    }
    r.involution = iota;
  }

  if (!j.at("F").is_null()) {
    fixedlocus::FixedLocusReport fx;
    fx.t = t;
    fx.F = h4_from_json(t, j.at("F").at("coords"));
    fx.dim_h0 = j.at("F").at("dim_h0").get<int>();
    for (const json& bj : j.at("F").at("branches")) {
      fixedlocus::BranchRecord br;
      br.v = bj.at("v").get<int>();
      br.linear_rank_ok = bj.at("linear_rank_ok").get<bool>();
      br.has_rational_roots = bj.at("has_rational_roots").get<bool>();
      for (const json& w : bj.at("roots")) br.roots.push_back(parse_rat(w));
      for (const json& cand : bj.at("integral_candidates")) {
        br.integral_candidates.push_back(h4_from_json(t, cand));
      }
      br.rejections = bj.at("rejections").get<std::vector<std::string>>();
      fx.branch_log.push_back(std::move(br));
    }
    r.fixed = std::move(fx);
  }

  if (!j.at("irreducibility").is_null()) {
    const json& irr = j.at("irreducibility");
    irreducibility::SwapVerdict sv;
    sv.t = t;
    const json& sw = irr.at("swap");
    sv.swap_excluded = sw.at("excluded").get<bool>();
    sv.line_has_integral_points = sw.at("line_has_integral_points").get<bool>();
    sv.witness = parse_rats<4>(sw.at("witness"));
    sv.direction = parse_ints<4>(sw.at("direction"));
    sv.witness_x_integral = sw.at("witness_x_integral").get<bool>();
    sv.witness_w_integral = sw.at("witness_w_integral").get<bool>();
    for (const json& s : sw.at("survivors")) {
      sv.surviving_candidates.push_back(alpha_from_json(t, s));
    }
    r.swap_verdict = std::move(sv);

    irreducibility::ObstructionVerdict ob;
    ob.t = t;
    const json& oj = irr.at("obstructions");
    ob.degree_two_obstructed = oj.at("degree_two_obstructed").get<bool>();
    ob.used_cone_branch = oj.at("used_cone_branch").get<bool>();
    ob.slope_inequality_holds = oj.at("slope_inequality_holds").get<bool>();
    ob.no_isotropic_classes = oj.at("no_isotropic_classes").get<bool>();
    r.obstructions = ob;

    for (const json& wj : irr.at("witnesses")) {
      DecompositionWitness w;
      w.t = t;
      w.A = alpha_from_json(t, wj.at("A"));
      w.B = alpha_from_json(t, wj.at("B"));
      w.checks_a = constraint_from_json(wj.at("checks_a"));
      w.checks_b = constraint_from_json(wj.at("checks_b"));
      r.witnesses.push_back(std::move(w));
    }

    if (!irr.at("schubert").is_null()) {
      irreducibility::SchubertClasses sch;
      sch.sigma11 = h4_from_json(t, irr.at("schubert").at("sigma11"));
      sch.sigma2 = h4_from_json(t, irr.at("schubert").at("sigma2"));
      sch.bitangent = h4_from_json(t, irr.at("schubert").at("bitangent"));
      r.schubert = std::move(sch);
    }
  }

  for (const json& cj : j.at("checks")) {
    r.checks.push_back(
        NamedCheck{cj.at("name").get<std::string>(), cj.at("pass").get<bool>()});
  }
  return r;
}

// ---------------------------------------------------------------------------
// text rendering

std::string to_text(const AnalysisReport& r) {
  std::ostringstream os;
  os << "t = " << r.t << "\n";
  os << "pell:\n";
  if (r.aut.t_is_square) {
    os << "  t is a perfect square; the unit group is trivial\n";
  } else {
    if (r.aut.neg) {
      os << "  negative  a = " << r.aut.neg->x << ", b = " << r.aut.neg->y << "\n";
    } else {
      os << "  negative  unsolvable\n";
    }
    os << "  unit      c = " << r.aut.unit->x << ", d = " << r.aut.unit->y << "\n";
    os << "  P_" << 4 * r.t << "(5)  "
       << (r.aut.pell_4t_5_solvable ? "solvable" : "unsolvable") << "\n";
  }
  os << "cones:\n";
  os << "  mu = " << rat_compact(r.cones.mu) << "  nu = " << rat_compact(r.cones.nu)
     << "  omega = " << rat_compact(r.cones.omega) << "\n";
  if (!r.admissible()) {
    os << "automorphism: trivial (no <2>-polarisation at this degree)\n";
  } else {
    os << "automorphism: nontrivial\n";
    const auto& m = r.involution->m;
    os << "  involution [ " << m[0][0] << " " << m[0][1] << " ; " << m[1][0] << " "
       << m[1][1] << " ]\n";
    os << "  D = " << ns_display(*r.aut.witness) << "\n";
    os << "fixed locus:\n";
    os << "  F = " << h4_display(r.fixed->F);
    if (const auto alpha = cohomology::to_integral(r.fixed->F)) {
      os << "  (alpha = " << alpha->a[0] << ", " << alpha->a[1] << ", "
         << alpha->a[2] << ", " << alpha->a[3] << ")";
    }
    os << "\n  dim H^0 = " << r.fixed->dim_h0 << "\n";
    os << "  branches:";
    for (const auto& br : r.fixed->branch_log) {
      os << " v=" << br.v << ":";
      if (!br.has_rational_roots) {
        os << " no rational roots;";
      } else {
        os << " roots {";
        for (std::size_t i = 0; i < br.roots.size(); ++i) {
          os << (i ? ", " : "") << rat_compact(br.roots[i]);
        }
        os << "}, " << br.integral_candidates.size() << " integral;";
      }
    }
    os << "\n";
    os << "irreducibility:\n";
    os << "  swap split excluded: "
       << (r.swap_verdict->swap_excluded ? "yes" : "NO") << " (line has integral points: "
       << (r.swap_verdict->line_has_integral_points ? "yes" : "no") << ")\n";
    os << "  obstructions: degree-two "
       << (r.obstructions->degree_two_obstructed ? "yes" : "NO") << ", slope "
       << (r.obstructions->slope_inequality_holds ? "yes" : "NO") << ", isotropic "
       << (r.obstructions->no_isotropic_classes ? "none" : "PRESENT") << "\n";
    if (r.witnesses.empty()) {
      os << "  decomposition candidates: none\n";
    } else {
      os << "  decomposition candidates:\n";
      for (const auto& w : r.witnesses) {
        os << "    A = (" << w.A.a[0] << ", " << w.A.a[1] << ", " << w.A.a[2] << ", "
           << w.A.a[3] << ")  B = (" << w.B.a[0] << ", " << w.B.a[1] << ", "
           << w.B.a[2] << ", " << w.B.a[3] << ")\n";
      }
    }
    if (r.schubert) {
      os << "  schubert: sigma_{1,1} = " << h4_display(r.schubert->sigma11)
         << "; sigma_2 = " << h4_display(r.schubert->sigma2)
         << "; bitangent = " << h4_display(r.schubert->bitangent) << "\n";
    }
  }
  os << "checks: " << r.checks_passed() << "/" << r.checks.size() << " pass\n";
  for (const auto& c : r.checks) {
    if (!c.pass) os << "  [FAIL] " << c.name << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// CSV rendering

namespace {

const char* kCsvHeader =
    "t,a,b,c,d,mu,nu,omega,aut,F_alpha1,F_alpha2,F_alpha3,F_alpha4,"
    "irreducible,checks_passed";

std::string csv_row(const AnalysisReport& r) {
  std::ostringstream os;
  os << r.t << ",";
  if (r.aut.neg) os << r.aut.neg->x << "," << r.aut.neg->y;
  else os << ",";
  os << ",";
  if (r.aut.unit) os << r.aut.unit->x << "," << r.aut.unit->y;
  else os << ",";
  os << "," << rat_str(r.cones.mu) << "," << rat_str(r.cones.nu) << ","
     << rat_str(r.cones.omega) << "," << (r.admissible() ? "true" : "false") << ",";
  if (r.fixed) {
    const auto alpha = cohomology::to_integral(r.fixed->F);
    os << alpha->a[0] << "," << alpha->a[1] << "," << alpha->a[2] << ","
       << alpha->a[3];
  } else {
    os << ",,,";
  }
  os << ",";
  if (r.admissible()) os << (r.irreducible() ? "true" : "false");
  os << "," << r.checks_passed();
  return os.str();
}

}  // namespace

std::string to_csv(const AnalysisReport& r) {
  return std::string(kCsvHeader) + "\n" + csv_row(r) + "\n";
}

// ---------------------------------------------------------------------------
// survey

namespace {

int pick_jobs(int jobs, long long task_count) {
  int n = jobs;
  if (n <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    n = static_cast<int>(std::clamp(hw, 1u, 8u));
  }
  n = static_cast<int>(std::min<long long>(n, task_count));
  return std::max(n, 1);
}

// Runs fn(t) for every t in [t_min, t_max] on a bounded pool.  The first
// exception wins and is rethrown on the caller thread after the join.
template <typename Fn>
void parallel_over_t(long long t_min, long long t_max, int jobs, Fn&& fn) {
  const long long count = t_max - t_min + 1;
  const int n = pick_jobs(jobs, count);
  if (n == 1) {
    for (long long t = t_min; t <= t_max; ++t) fn(t);
    return;
  }
  std::atomic<long long> next{t_min};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    pool.emplace_back([&] {
      for (;;) {
        const long long t = next.fetch_add(1);
        if (t > t_max) return;
        try {
          fn(t);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

SurveyRow row_from_report(const AnalysisReport& r) {
  SurveyRow row;
  row.t = r.t;
  row.a = r.aut.neg->x;
  row.b = r.aut.neg->y;
  row.c = r.aut.unit->x;
  row.d = r.aut.unit->y;
  row.mu = r.cones.mu;
  row.nu = r.cones.nu;
  row.omega = r.cones.omega;
  row.aut = true;
  row.f_alpha = cohomology::to_integral(r.fixed->F)->a;
  row.irreducible = r.irreducible();
  row.checks_passed = r.checks_passed();
  row.checks_total = static_cast<int>(r.checks.size());
  return row;
}

std::vector<AnalysisReport> analyze_admissible_range(long long t_min,
                                                     long long t_max, int jobs,
                                                     const AnalyzeOptions& opts) {
  if (t_min < 2 || t_min > t_max) {
    throw std::domain_error("invalid range: need 2 <= t_min <= t_max");
  }
  std::vector<std::optional<AnalysisReport>> slots(
      static_cast<std::size_t>(t_max - t_min + 1));
  parallel_over_t(t_min, t_max, jobs, [&](long long t) {
    if (!picard::aut_is_nontrivial(t)) return;
    slots[static_cast<std::size_t>(t - t_min)] = analyze(t, opts);
  });
  std::vector<AnalysisReport> out;
  for (auto& slot : slots) {
    if (slot) out.push_back(std::move(*slot));
  }
  return out;
}

}  // namespace

SurveyResult survey(long long t_min, long long t_max, int jobs,
                    const AnalyzeOptions& opts) {
  SurveyResult result;
  result.t_min = t_min;
  result.t_max = t_max;
  for (const auto& r : analyze_admissible_range(t_min, t_max, jobs, opts)) {
    result.rows.push_back(row_from_report(r));
  }
  return result;
}

std::string to_text(const SurveyResult& s) {
  // Column-aligned table; widths adapt to the largest entry.
  std::vector<std::array<std::string, 15>> cells;
  std::array<std::string, 15> header = {"t", "a", "b", "c", "d", "mu", "nu",
                                        "omega", "aut", "F_a1", "F_a2", "F_a3",
                                        "F_a4", "irred", "checks"};
  cells.push_back(header);
  for (const auto& row : s.rows) {
    cells.push_back({std::to_string(row.t), row.a.get_str(), row.b.get_str(),
                     row.c.get_str(), row.d.get_str(), rat_compact(row.mu),
                     rat_compact(row.nu), rat_compact(row.omega),
                     row.aut ? "yes" : "no", row.f_alpha[0].get_str(),
                     row.f_alpha[1].get_str(), row.f_alpha[2].get_str(),
                     row.f_alpha[3].get_str(), row.irreducible ? "yes" : "no",
                     std::to_string(row.checks_passed) + "/" +
                         std::to_string(row.checks_total)});
  }
  std::array<std::size_t, 15> width{};
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      width[i] = std::max(width[i], line[i].size());
    }
  }
  std::ostringstream os;
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      os << (i ? "  " : "") << std::string(width[i] - line[i].size(), ' ')
         << line[i];
    }
    os << "\n";
  }
  if (s.rows.empty()) {
    os << "(no admissible t in [" << s.t_min << ", " << s.t_max << "])\n";
  }
  return os.str();
}

nlohmann::json to_json(const SurveyResult& s) {
  json rows = json::array();
  for (const auto& row : s.rows) {
    rows.push_back(json{{"t", row.t},
                        {"a", j_int(row.a)},
                        {"b", j_int(row.b)},
                        {"c", j_int(row.c)},
                        {"d", j_int(row.d)},
                        {"mu", j_rat(row.mu)},
                        {"nu", j_rat(row.nu)},
                        {"omega", j_rat(row.omega)},
                        {"aut", row.aut},
                        {"F_alpha", j_ints<4>(row.f_alpha)},
                        {"irreducible", row.irreducible},
                        {"checks_passed", row.checks_passed},
                        {"checks_total", row.checks_total}});
  }
  return json{{"t_min", s.t_min}, {"t_max", s.t_max}, {"rows", rows}};
}

std::string to_csv(const SurveyResult& s) {
  std::ostringstream os;
  os << kCsvHeader << "\n";
  for (const auto& row : s.rows) {
    os << row.t << "," << row.a << "," << row.b << "," << row.c << "," << row.d
       << "," << rat_str(row.mu) << "," << rat_str(row.nu) << ","
       << rat_str(row.omega) << "," << (row.aut ? "true" : "false") << ","
       << row.f_alpha[0] << "," << row.f_alpha[1] << "," << row.f_alpha[2] << ","
       << row.f_alpha[3] << "," << (row.irreducible ? "true" : "false") << ","
       << row.checks_passed << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// check suite

namespace {

// Structural pass over the Pell solver on a fixed grid: every returned class
// satisfies its equation, fundamentals are pairwise inequivalent, and the
// class set is nonempty exactly when the solvability test says so.
bool pell_structure_ok() {
  const long long ds[] = {2, 3, 5, 6, 7, 8, 10, 13};
  const long long ns[] = {1, -1, 2, -2, 4, -4, 5, 9, -9};
  for (const long long d : ds) {
    for (const long long n : ns) {
      const auto set = pell::solve_pell_type(d, n);
      if (set.fundamentals.empty() != !pell::is_solvable(d, n)) return false;
      for (std::size_t i = 0; i < set.fundamentals.size(); ++i) {
        const auto& f = set.fundamentals[i];
        const Int x = f.sign * f.fundamental.x;
        const Int& y = f.fundamental.y;
        if (x * x - to_int(d) * y * y != to_int(n)) return false;
        for (std::size_t k = i + 1; k < set.fundamentals.size(); ++k) {
          const auto& g = set.fundamentals[k];
          if (pell::are_equivalent(x, y, g.sign * g.fundamental.x,
                                   g.fundamental.y, d, n)) {
            return false;
          }
        }
      }
    }
  }
  return true;
}

}  // namespace

CheckSuiteResult run_check_suite(long long t_max, int jobs) {
  if (t_max < 2) {
    throw std::domain_error("check suite needs t_max >= 2, got " +
                            std::to_string(t_max));
  }
  CheckSuiteResult result;
  result.t_max = t_max;

  const auto reports = analyze_admissible_range(2, t_max, jobs, AnalyzeOptions{});
  std::vector<std::string> order = {"pell_class_structure"};
  std::vector<char> pass_by_name = {pell_structure_ok() ? char(1) : char(0)};
  auto slot_of = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (order[i] == name) return i;
    }
    order.push_back(name);
    pass_by_name.push_back(1);
    return order.size() - 1;
  };
  if (!pass_by_name[0]) result.failures.push_back("pell_class_structure");

  for (const auto& r : reports) {
    result.admissible.push_back(r.t);
    for (const auto& c : r.checks) {
      const std::size_t slot = slot_of(c.name);
      if (!c.pass) {
        pass_by_name[slot] = 0;
        result.failures.push_back(c.name + " at t=" + std::to_string(r.t));
      }
    }
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    result.aggregated.push_back(NamedCheck{order[i], pass_by_name[i] != 0});
  }
  return result;
}

std::string to_text(const CheckSuiteResult& c) {
  std::ostringstream os;
  os << "admissible t <= " << c.t_max << ":";
  for (const long long t : c.admissible) os << " " << t;
  os << "  (" << c.admissible.size() << " values)\n";
  for (const auto& line : c.aggregated) {
    os << "  [" << (line.pass ? "PASS" : "FAIL") << "] " << line.name << "\n";
  }
  if (c.all_pass()) {
    os << "all invariants hold\n";
  } else {
    os << "violations:\n";
    for (const auto& f : c.failures) os << "  " << f << "\n";
  }
  return os.str();
}

nlohmann::json to_json(const CheckSuiteResult& c) {
  json lines = json::array();
  for (const auto& line : c.aggregated) {
    lines.push_back(json{{"name", line.name}, {"pass", line.pass}});
  }
  return json{{"t_max", c.t_max},
              {"admissible", c.admissible},
              {"checks", lines},
              {"failures", c.failures},
              {"all_pass", c.all_pass()}};
}

std::string to_csv(const CheckSuiteResult& c) {
  std::ostringstream os;
  os << "name,pass\n";
  for (const auto& line : c.aggregated) {
    os << line.name << "," << (line.pass ? "true" : "false") << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// pell subcommand rendering

std::string to_text(const pell::SolutionClassSet& s) {
  std::ostringstream os;
  os << "x^2 - " << s.d << " y^2 = " << s.n << ": " << s.class_count()
     << (s.class_count() == 1 ? " class" : " classes") << "\n";
  for (const auto& f : s.fundamentals) {
    os << "  (" << (f.sign < 0 ? "-" : "") << f.fundamental.x << ", "
       << f.fundamental.y << ")";
    if (f.conjugate_paired) os << "  [conjugate pair]";
    os << "\n";
  }
  if (s.minimal_positive) {
    os << "minimal positive: (" << s.minimal_positive->x << ", "
       << s.minimal_positive->y << ")\n";
  }
  return os.str();
}

nlohmann::json to_json(const pell::SolutionClassSet& s) {
  json classes = json::array();
  for (const auto& f : s.fundamentals) {
    classes.push_back(json{{"x", j_int(f.fundamental.x)},
                           {"y", j_int(f.fundamental.y)},
                           {"sign", f.sign},
                           {"conjugate_paired", f.conjugate_paired}});
  }
  json out{{"d", s.d}, {"n", s.n}, {"classes", classes}};
  if (s.minimal_positive) {
    out["minimal_positive"] = json{{"x", j_int(s.minimal_positive->x)},
                                   {"y", j_int(s.minimal_positive->y)}};
  } else {
    out["minimal_positive"] = nullptr;
  }
  return out;
}

std::string to_csv(const pell::SolutionClassSet& s) {
  std::ostringstream os;
  os << "x,y,sign,conjugate_paired\n";
  for (const auto& f : s.fundamentals) {
    os << f.fundamental.x << "," << f.fundamental.y << "," << f.sign << ","
       << (f.conjugate_paired ? "true" : "false") << "\n";
  }
  return os.str();
}

}  // namespace hilbsq::report
