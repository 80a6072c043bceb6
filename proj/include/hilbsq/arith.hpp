#pragma once

// Exact arithmetic foundation: arbitrary-precision integers and rationals
// (GMP-backed), the real quadratic ring Z[sqrt(d)], perfect-square detection,
// and small dense linear algebra over Q. No floating point anywhere.

#include <gmpxx.h>

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hilbsq {

using Int = mpz_class;
using Rat = mpq_class;

// Thrown when a computed value contradicts an identity the library relies on;
// callers treat it as an internal failure, not bad input.
struct invariant_error : std::logic_error {
  using std::logic_error::logic_error;
};

inline Int to_int(long long v) { return Int(static_cast<long>(v)); }

Int igcd(Int a, Int b);

// Canonical rational: lowest terms, positive denominator.
Rat make_rat(const Int& num, const Int& den);
bool is_integer(const Rat& q);
Int rat_floor(const Rat& q);
Int rat_ceil(const Rat& q);

// "num/den", denominator always spelled out (lossless, uniform).
std::string rat_str(const Rat& q);

// floor(sqrt(n)) for n >= 0.
Int isqrt(const Int& n);
bool is_square(const Int& n);
bool is_square(const Int& n, Int& root);

// Exact square root of a non-negative rational, when it exists in Q.
std::optional<Rat> rat_sqrt(const Rat& q);

// Element a + b*sqrt(d) of Z[sqrt(d)], d a positive nonsquare.
struct QuadInt {
  Int a, b, d;
  QuadInt(Int a_, Int b_, Int d_);
};

QuadInt quad_mul(const QuadInt& u, const QuadInt& v);
Int quad_norm(const QuadInt& z);
QuadInt quad_conj(const QuadInt& z);

using RatVec = std::vector<Rat>;
using RatMat = std::vector<std::vector<Rat>>;

// Gaussian elimination; nullopt when A is singular.
std::optional<RatVec> solve_linear(RatMat a, RatVec rhs);

// Row-reduce an m x n system A x = rhs. Returns the rank; when the system is
// consistent the solution set is base + span(dirs) with dim = n - rank.
struct LinearSolution {
  int rank = 0;
  bool consistent = false;
  RatVec base;
  std::vector<RatVec> dirs;
};
LinearSolution solve_general(RatMat a, RatVec rhs);

Rat det(RatMat a);

// Rational roots of qa*s^2 + qb*s + qc = 0.
struct QuadraticRoots {
  bool degenerate = false;  // qa == 0
  bool has_real = false;    // discriminant >= 0
  bool rational = false;    // roots lie in Q
  std::vector<Rat> roots;
};
QuadraticRoots solve_rational_quadratic(const Rat& qa, const Rat& qb, const Rat& qc);

}  // namespace hilbsq
