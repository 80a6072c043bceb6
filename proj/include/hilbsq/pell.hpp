#pragma once

// Pell and Pell-type equations x^2 - d y^2 = n: fundamental units via the
// periodic continued fraction of sqrt(d), negative-Pell minimal solutions,
// and the full equivalence-class structure of P_d(n) with fundamental
// solutions found inside the classical Nagell window.

#include "hilbsq/arith.hpp"

#include <optional>
#include <vector>

namespace hilbsq::pell {

// A solution of x^2 - d y^2 = n, stored with x, y >= 0.
struct PellSolution {
  Int x, y;
  long long d = 0;
  long long n = 0;
};

// One equivalence class, represented by its fundamental solution: the class
// member with smallest non-negative y, and x > 0 when both (x, y) and (-x, y)
// lie in the same class. `sign` restores the true representative
// (sign * x, y). Classes whose mirror (-x, y) is inequivalent come in pairs;
// both are listed, sharing (x, y) and flagged conjugate_paired.
struct SolutionClass {
  PellSolution fundamental;
  int sign = 1;
  bool conjugate_paired = false;
};

struct SolutionClassSet {
  long long d = 0;
  long long n = 0;
  std::vector<SolutionClass> fundamentals;
  std::optional<PellSolution> minimal_positive;
  std::size_t class_count() const { return fundamentals.size(); }
};

// Continued-fraction expansion data for sqrt(d): period length and the
// minimal solutions it yields.
struct CfData {
  long long d = 0;
  long period = 0;                       // odd iff P_d(-1) is solvable
  PellSolution unit;                     // minimal solution of P_d(1)
  std::optional<PellSolution> negative;  // minimal solution of P_d(-1)
};
CfData cf_expand(long long d);

// Minimal solution (c, d') of x^2 - d y^2 = 1 with c, d' > 0.
PellSolution fundamental_unit(long long d);

// Minimal positive solution of x^2 - d y^2 = -1, absent when unsolvable
// (the continued-fraction period of sqrt(d) is even).
std::optional<PellSolution> minimal_negative(long long d);

// One fundamental solution per equivalence class, complete within the Nagell
// window derived from the fundamental unit. `window_cap` guards against
// pathologically large windows: if the window exceeds it, the call fails
// loudly instead of truncating the search.
inline constexpr long long kDefaultWindowCap = 10'000'000;
SolutionClassSet solve_pell_type(long long d, long long n,
                                 std::optional<long long> window_cap = std::nullopt);

// Equivalence test: (x1 x2 - d y1 y2)/n and (x1 y2 - x2 y1)/n both integers.
bool are_equivalent(const Int& x1, const Int& y1, const Int& x2, const Int& y2,
                    long long d, long long n);
bool are_equivalent(const PellSolution& s1, const PellSolution& s2);

// Solvability of P_d(n). Uses the convergent criterion when n^2 < d (every
// positive primitive solution is a convergent of sqrt(d), so the values
// (-1)^k Q_k over two periods decide the question), the Nagell window
// otherwise.
bool is_solvable(long long d, long long n);

// Positive solution (x, y > 0) with smallest x, absent when none exists.
std::optional<PellSolution> minimal_positive(long long d, long long n);

}  // namespace hilbsq::pell
