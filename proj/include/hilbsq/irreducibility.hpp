#pragma once

#include <array>
#include <string>
#include <vector>

#include "hilbsq/arith.hpp"
#include "hilbsq/cohomology.hpp"

namespace hilbsq::irreducibility {

using cohomology::H4Class;
using cohomology::H4IntegralCoords;

// Outcome of the exchange-system analysis: whether the involution can swap
// the two halves of an integral decomposition D^2 = A1 + A2.  The system is
// solved exactly; its solutions form a rational line through the symmetric
// point D^2/2.  Integrality alone does not close the case: for some t the
// line does contain integral points (t = 13 is the smallest), so the
// exclusion enumerates every integral point inside the window cut out by
// the effectivity-necessary conditions and certifies that none survives.
struct SwapVerdict {
  long long t = 0;
  bool swap_excluded = false;            // no effective integral swap split
  bool line_has_integral_points = false;
  std::array<Rat, 4> witness{};    // symmetric solution, x = b^2/2 - ab
  std::array<Int, 4> direction{};  // primitive direction of the solution line
  bool witness_x_integral = false;
  bool witness_w_integral = false;  // w = -a^2/2, integral only for even a
  std::vector<H4IntegralCoords> surviving_candidates;  // expected empty
};

SwapVerdict swap_system_check(long long t);

// Arithmetic obstructions against reducible members of |D|: no (-2)-class
// can split off (empty Pell set, or the (-4)-class outside the cone at t=2),
// the slope inequality for delta-subtraction, and absence of isotropic
// classes.
struct ObstructionVerdict {
  long long t = 0;
  bool degree_two_obstructed = false;
  bool used_cone_branch = false;  // t == 2 takes the cone argument
  bool slope_inequality_holds = false;
  bool no_isotropic_classes = false;

  bool all_pass() const {
    return degree_two_obstructed && slope_inequality_holds && no_isotropic_classes;
  }
};

ObstructionVerdict prime_divisor_obstructions(long long t);

// Necessary effectivity conditions evaluated on one half of a candidate
// decomposition.
struct ConstraintChecks {
  Int h2_degree;      // pairing against h^2 over 2t; 0 <= . <= h2_degree_max
  Int h2_degree_max;  // 6 t b^2 - 2 a^2
  Int sigma;          // 0 <= . <= 2
  Int d2_pairing;     // 0 < . < 12
  bool iota_fixed = false;

  bool all_hold() const {
    return h2_degree >= 0 && h2_degree <= h2_degree_max && sigma >= 0 &&
           sigma <= 2 && d2_pairing > 0 && d2_pairing < 12 && iota_fixed;
  }
};

// Candidate splitting D^2 = A + B into integral iota-fixed halves that pass
// every necessary condition.  Candidates only: emptiness proves the surface
// irreducible, non-emptiness merely names the suspects.
struct DecompositionWitness {
  long long t = 0;
  H4IntegralCoords A;
  H4IntegralCoords B;
  ConstraintChecks checks_a;
  ConstraintChecks checks_b;
};

std::vector<DecompositionWitness> search_decompositions(
    long long t, bool scan_full_range = false,
    std::vector<std::string>* skip_log = nullptr);

// The distinguished degree-4 classes at t = 2, pulled back from the
// Grassmannian through the degree-6 cover, plus the bitangent combination.
struct SchubertClasses {
  H4Class sigma11;
  H4Class sigma2;
  H4Class bitangent;
};

SchubertClasses schubert_classes(long long t);

}  // namespace hilbsq::irreducibility
