#pragma once

#include <array>
#include <optional>
#include <utility>

#include "hilbsq/arith.hpp"
#include "hilbsq/picard.hpp"

namespace hilbsq::cohomology {

using picard::NSClass;

// Rational class in the invariant part of H^4, written against the basis
// {h^2, h.delta, delta^2, (2/5)q^vee} with coordinates (p, q, r, s).  Here
// q^vee is the class dual to the Beauville-Bogomolov form.
struct H4Class {
  long long t = 0;
  std::array<Rat, 4> c{};
};

// The same group against the integral basis
//   {h^2, (h^2 - h.delta)/2, (delta^2 + (2/5)q^vee)/8, (2/5)q^vee}.
struct H4IntegralCoords {
  long long t = 0;
  std::array<Int, 4> a{};
};

// Class in the invariant part of H^6 against the basis {h^3, h^2.delta}.
struct H6Class {
  long long t = 0;
  Rat u;
  Rat v;
};

bool operator==(const H4Class& x, const H4Class& y);
H4Class operator+(const H4Class& x, const H4Class& y);
H4Class operator-(const H4Class& x, const H4Class& y);
H4Class operator*(const Rat& k, const H4Class& x);

H4Class from_integral(const H4IntegralCoords& a);
std::optional<H4IntegralCoords> to_integral(const H4Class& e);

// Cup product of two divisor classes, landing in H^4.
H4Class cup_h2(const NSClass& c1, const NSClass& c2);

// Poincare pairing on the invariant H^4.
Rat pair_h4(const H4Class& e1, const H4Class& e2);

struct GramH22 {
  long long t = 0;
  std::array<std::array<Int, 4>, 4> m{};
  Int discriminant;
};

// Gram matrix of the pairing on the integral basis, with its determinant.
GramH22 gram_h22(long long t);

// Action of the nontrivial involution on H^4.
H4Class iota_star_h4(const H4Class& e);

// Pairing against the characteristic degree-4 class: 2t*p - 2r + 10s.
Rat sigma_functional(const H4Class& e);

// Fujiki relation: <c^2, c^2> = 3 q(c)^2, checked against the pairing.
Int fujiki_quartic(const NSClass& c);

// Multiplication H^4 x H^2 -> H^6 followed by expansion in {h^3, h^2.delta}.
H6Class reduce_to_h6(const H4Class& e, const NSClass& c);

// Coordinates against the integral basis {h^3/(6t), h^2.delta/(4t)} when
// the class is integral.
std::optional<std::pair<Int, Int>> h6_integral(const H6Class& w);

// q(c) / div(c), the pairing of c against the primitive dual generator.
Rat dual_pairing(const NSClass& c);

}  // namespace hilbsq::cohomology
