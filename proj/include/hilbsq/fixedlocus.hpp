#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hilbsq/arith.hpp"
#include "hilbsq/cohomology.hpp"

namespace hilbsq::fixedlocus {

using cohomology::H4Class;

// One case of the pairing target <F, D^2> = 4v.  The linear conditions cut
// out a rational line; the record keeps the rational roots of the quadratic
// restricted to that line and why each was kept or dropped.
struct BranchRecord {
  int v = 0;
  bool linear_rank_ok = false;
  bool has_rational_roots = false;
  std::vector<Rat> roots;  // w-coordinates (coefficient of (2/5)q^vee)
  std::vector<H4Class> integral_candidates;
  std::vector<std::string> rejections;
};

struct FixedLocusReport {
  long long t = 0;
  H4Class F;
  int dim_h0 = 0;
  std::vector<BranchRecord> branch_log;
};

// Dimension count dim H^0(W, D_W) = 7/2 + dfsq/16 + ... solved for the
// square; defined exactly when (dfsq + 56)/16 is an integer in 0..6.
std::optional<int> dim_h0_from_square(const Int& dfsq);

// Solve for the class of the fixed surface of the involution: three exact
// linear conditions (sigma-orthogonality, iota-fixedness, pairing against
// D^2) plus the quadratic self-intersection condition, followed by the
// integrality filter.  The admissible class must be unique.
FixedLocusReport solve_fixed_class(long long t);

}  // namespace hilbsq::fixedlocus
