#pragma once

#include <array>
#include <optional>

#include "hilbsq/arith.hpp"
#include "hilbsq/pell.hpp"

namespace hilbsq::picard {

// Divisor class x*h - y*delta on the Hilbert square of a degree-2t K3
// surface, written against the standard basis {h, delta} of the invariant
// Picard lattice.  The Beauville-Bogomolov form is q(h) = 2t, q(delta) = -2,
// (h, delta) = 0.
struct NSClass {
  long long t = 0;
  Int xh;  // coefficient of h
  Int yd;  // coefficient of delta, with the sign convention x*h - y*delta
};

NSClass h_class(long long t);
NSClass delta_class(long long t);

bool operator==(const NSClass& a, const NSClass& b);
NSClass operator+(const NSClass& a, const NSClass& b);
NSClass operator-(const NSClass& a, const NSClass& b);
NSClass operator*(const Int& k, const NSClass& c);

Int bbf_pair(const NSClass& c1, const NSClass& c2);
Int bbf_q(const NSClass& c);

// Divisibility of the class in the full degree-2 lattice: the positive
// generator of the ideal (c, -) <= Z.  Requires a primitive class.
Int divisibility(const NSClass& c);

// Slopes of the nef and pseudoeffective cones in the (h, delta)-plane.
// Both cones have h-axis ray plus a boundary ray h - s*delta; mu is the
// movable-cone slope, nu the nef slope, omega the pseudoeffective slope.
struct ConeSlopes {
  long long t = 0;
  Rat mu;
  Rat nu;
  Rat omega;
};

ConeSlopes cone_slopes(long long t);

bool is_ample(const NSClass& c, const ConeSlopes& slopes);
bool is_ample(const NSClass& c);
bool is_pseudoeffective(const NSClass& c, const ConeSlopes& slopes);
bool is_pseudoeffective(const NSClass& c);

// Existence of a nontrivial automorphism, decided through the arithmetic
// of the Pell equations attached to t, together with the data the decision
// rests on.  When the answer is yes the witness is the ample class
// D = b*h - a*delta of square 2, where (a, b) solves a^2 - t b^2 = -1.
struct AutResult {
  long long t = 0;
  bool nontrivial = false;
  bool t_is_square = false;
  bool pell_4t_5_solvable = false;
  bool neg_pell_solvable = false;
  std::optional<pell::PellSolution> neg;   // minimal (a, b) with a^2 - t b^2 = -1
  std::optional<pell::PellSolution> unit;  // minimal (c, d) with c^2 - t d^2 = 1
  std::optional<NSClass> witness;
};

AutResult aut_result(long long t);
bool aut_is_nontrivial(long long t);

// Action of the nontrivial involution on the (x, y) coordinates of
// x*h - y*delta.  Built from the fundamental unit (c, d); squares to the
// identity and preserves the Beauville-Bogomolov form.
struct InvolutionMatrix {
  long long t = 0;
  std::array<std::array<Int, 2>, 2> m;

  NSClass apply(const NSClass& c) const;
};

InvolutionMatrix involution_matrix(long long t);

}  // namespace hilbsq::picard
