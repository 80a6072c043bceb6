// Command-line front end: per-degree analysis reports, admissible-degree
// surveys, raw Pell queries, and the invariant check suite.
//
// Exit codes: 0 on success, 1 when the degree admits no <2>-polarisation or
// the input is invalid, 2 on any internal invariant violation.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hilbsq/report.hpp"

namespace {

void emit(const std::string& format, const std::string& text,
          const nlohmann::json& json_doc, const std::string& csv) {
  if (format == "json") {
    std::cout << json_doc.dump(2) << "\n";
  } else if (format == "csv") {
    std::cout << csv;
  } else {
    std::cout << text;
  }
}

std::string first_failure(const hilbsq::report::AnalysisReport& rep) {
  for (const auto& c : rep.checks) {
    if (!c.pass) return c.name;
  }
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact arithmetic for <2>-polarised Hilbert squares of K3 surfaces"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string format = "text";
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  bool full_range = false;
  app.add_flag("--full-range", full_range,
               "scan the full symmetric range in the decomposition search");
  long long bound = 0;
  app.add_option("--bound", bound, "override the Pell search safety bound");
  int jobs = 0;
  app.add_option("--jobs", jobs, "worker pool size for survey and check");

  long long t = 0, t_min = 0, t_max = 0, pell_d = 0, pell_n = 0, check_max = 0;
  CLI::App* cmd_analyze = app.add_subcommand("analyze", "full report for one degree");
  cmd_analyze->add_option("t", t, "half the polarisation degree")->required();
  CLI::App* cmd_survey =
      app.add_subcommand("survey", "one row per admissible degree in a range");
  cmd_survey->add_option("t_min", t_min, "lower bound")->required();
  cmd_survey->add_option("t_max", t_max, "upper bound")->required();
  CLI::App* cmd_pell =
      app.add_subcommand("pell", "equivalence classes of x^2 - d y^2 = n");
  cmd_pell->add_option("d", pell_d, "nonsquare coefficient")->required();
  cmd_pell->add_option("n", pell_n, "right-hand side")->required();
  CLI::App* cmd_check =
      app.add_subcommand("check", "run every invariant for admissible t <= t_max");
  cmd_check->add_option("t_max", check_max, "upper bound")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    hilbsq::report::AnalyzeOptions opts;
    opts.full_range = full_range;

    if (cmd_analyze->parsed()) {
      const auto rep = hilbsq::report::analyze(t, opts);
      emit(format, to_text(rep), to_json(rep), to_csv(rep));
      if (!rep.all_checks_pass()) {
        std::cerr << "invariant violation: " << first_failure(rep) << " at t=" << t
                  << "\n";
        return 2;
      }
      return rep.admissible() ? 0 : 1;
    }
    if (cmd_survey->parsed()) {
      const auto res = hilbsq::report::survey(t_min, t_max, jobs, opts);
      emit(format, to_text(res), to_json(res), to_csv(res));
      for (const auto& row : res.rows) {
        if (row.checks_passed != row.checks_total) {
          std::cerr << "invariant violation at t=" << row.t << "\n";
          return 2;
        }
      }
      return 0;
    }
    if (cmd_pell->parsed()) {
      const auto set = hilbsq::pell::solve_pell_type(
          pell_d, pell_n,
          bound > 0 ? std::optional<long long>(bound) : std::nullopt);
      emit(format, hilbsq::report::to_text(set), hilbsq::report::to_json(set),
           hilbsq::report::to_csv(set));
      return 0;
    }
    if (cmd_check->parsed()) {
      const auto res = hilbsq::report::run_check_suite(check_max, jobs);
      emit(format, to_text(res), to_json(res), to_csv(res));
      if (!res.all_pass()) {
        std::cerr << "invariant violation: " << res.failures.front() << "\n";
        return 2;
      }
      return 0;
    }
  } catch (const hilbsq::invariant_error& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
