#pragma once

// Report assembly for the command-line front end: the full per-t analysis
// pipeline with named consistency checks, range surveys over admissible t,
// and the invariant check suite.  Everything renders to text, JSON and CSV;
// every rational is serialized as an exact "num/den" string.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hilbsq/arith.hpp"
#include "hilbsq/cohomology.hpp"
#include "hilbsq/fixedlocus.hpp"
#include "hilbsq/irreducibility.hpp"
#include "hilbsq/picard.hpp"
#include "hilbsq/pell.hpp"

namespace hilbsq::report {

struct NamedCheck {
  std::string name;
  bool pass = false;
};

// Full analysis of one degree.  For non-admissible t only the Pell data,
// cone slopes and lattice checks are populated; the admissible-only fields
// stay empty and `aut.nontrivial` is false.
struct AnalysisReport {
  long long t = 0;
  picard::AutResult aut;
  picard::ConeSlopes cones;
  std::optional<picard::InvolutionMatrix> involution;
  std::optional<fixedlocus::FixedLocusReport> fixed;
  std::optional<irreducibility::SwapVerdict> swap_verdict;
  std::optional<irreducibility::ObstructionVerdict> obstructions;
  std::vector<irreducibility::DecompositionWitness> witnesses;
  std::optional<irreducibility::SchubertClasses> schubert;
  std::vector<NamedCheck> checks;

  bool admissible() const { return aut.nontrivial; }
  int checks_passed() const;
  bool all_checks_pass() const;
  // The intersection surface is irreducible when the swap split is excluded,
  // the arithmetic obstructions all hold and the search finds no candidate.
  bool irreducible() const;
};

struct AnalyzeOptions {
  bool full_range = false;
};

AnalysisReport analyze(long long t, const AnalyzeOptions& opts = {});

// Lossless structural equality, field by field over everything the JSON
// rendering carries.  parse(render(r)) == r.
bool operator==(const AnalysisReport& a, const AnalysisReport& b);
inline bool operator!=(const AnalysisReport& a, const AnalysisReport& b) {
  return !(a == b);
}

std::string to_text(const AnalysisReport& r);
nlohmann::json to_json(const AnalysisReport& r);
AnalysisReport report_from_json(const nlohmann::json& j);
std::string to_csv(const AnalysisReport& r);  // header line plus one row

// Display form of a divisor class, e.g. "h - 3*delta"; parse inverts it.
std::string ns_display(const picard::NSClass& c);
picard::NSClass ns_parse(long long t, const std::string& s);

// One survey row per admissible t.
struct SurveyRow {
  long long t = 0;
  Int a, b, c, d;
  Rat mu, nu, omega;
  bool aut = false;
  std::array<Int, 4> f_alpha{};
  bool irreducible = false;
  int checks_passed = 0;
  int checks_total = 0;
};

struct SurveyResult {
  long long t_min = 0;
  long long t_max = 0;
  std::vector<SurveyRow> rows;
};

// Fans the per-t analyses out to a bounded worker pool (`jobs` <= 0 picks a
// default from the hardware); rows come back ordered by t regardless of
// completion order.  Throws on any internal invariant violation.
SurveyResult survey(long long t_min, long long t_max, int jobs = 0,
                    const AnalyzeOptions& opts = {});

std::string to_text(const SurveyResult& s);
nlohmann::json to_json(const SurveyResult& s);
std::string to_csv(const SurveyResult& s);

// The consistency-check suite: every named check, aggregated over all
// admissible t <= t_max, plus a structural pass over the Pell solver.
struct CheckSuiteResult {
  long long t_max = 0;
  std::vector<long long> admissible;
  std::vector<NamedCheck> aggregated;   // one line per check name
  std::vector<std::string> failures;    // "name at t=N", empty when clean

  bool all_pass() const { return failures.empty(); }
};

CheckSuiteResult run_check_suite(long long t_max, int jobs = 0);

std::string to_text(const CheckSuiteResult& c);
nlohmann::json to_json(const CheckSuiteResult& c);
std::string to_csv(const CheckSuiteResult& c);

// Rendering for the pell subcommand.
std::string to_text(const pell::SolutionClassSet& s);
nlohmann::json to_json(const pell::SolutionClassSet& s);
std::string to_csv(const pell::SolutionClassSet& s);

}  // namespace hilbsq::report
