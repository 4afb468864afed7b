#pragma once

// Finite stabilization on positive spheres of l_inf^n: the y_r^(n) vectors,
// the distribution pseudometric dis, epsilon-nets, almost-spreading sets,
// small-diameter block sequences and the end-to-end pipeline.

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "fink/lipschitz.hpp"
#include "fink/posvector.hpp"
#include "fink/provider.hpp"

namespace fink {

/// Exponent profile of y_r^(n): coefficient i is r^e[i]. Length 3^n.
std::vector<int> y_exponents(std::size_t n, std::size_t budget = 1u << 22);
PosVector build_y(std::size_t n, const Rational& r, std::size_t budget = 1u << 22);

/// inf of ||x' - y'||_inf over x', y' distributed as x, y. Binary search over
/// candidate values with a bit-parallel feasibility sweep.
Rational dis(const PosVector& x, const PosVector& y, std::size_t cell_budget = std::size_t(1) << 34);
/// Plain min-max alignment DP over exact rationals.
Rational dis_reference(const PosVector& x, const PosVector& y, std::size_t cell_budget = std::size_t(1) << 26);
bool dist_equal(const PosVector& x, const PosVector& y);

/// All vectors on {0..l-1} with coordinates in {0, 1/q, ..., 1} and max exactly 1.
std::vector<PosVector> positive_net(std::size_t l, std::size_t q, std::size_t budget = 1u << 22);
/// (q+1)^l - q^l; the sizing used in the bound is q^(l-1).
std::size_t positive_net_size(std::size_t l, std::size_t q);

struct MountainComponent {
  std::size_t offset = 0;
  int scale = 0;   // component is r^scale times a copy of y^(depth)
  int depth = 0;
  bool center = false;
  PosVector vec;   // positioned inside y^(n)'s support
};

/// y^(n) = r y^(n-1) + ... + r^n y^(0) + e + r^n y^(0) + ... + r y^(n-1), 2n+1 components.
std::vector<MountainComponent> mountains_decompose(std::size_t n, const Rational& r);
PosVector reassemble(const std::vector<MountainComponent>& parts);

/// max f - min f over the points (OpenMP).
Rational oscillation(const LipschitzFn& f, const std::vector<PosVector>& points);
Rational oscillation_serial(const LipschitzFn& f, const std::vector<PosVector>& points);

struct SpreadingResult {
  std::vector<std::size_t> set;
  std::size_t colors = 0;       // ceil(3C/eps) interval colors
  std::size_t colorings = 0;    // number of (l, a) colorings homogenized
  std::string plan;
  bool verified = false;
};

/// A subset of {0..d-1} of size m on which f is eps-almost spreading for all
/// l < m and all coefficient tuples of the strictly positive grid of step 1/ceil(3C/eps).
SpreadingResult spreading_extract(const LipschitzFn& f, std::size_t d, std::size_t m, const Rational& C,
                                  const Rational& eps, const NumberProvider& provider);
/// Checks every l < m by enumeration.
bool verify_spreading(const LipschitzFn& f, const std::vector<std::size_t>& set, std::size_t m, const Rational& eps,
                      std::size_t q);

/// Witness z' distributed as y^(st) for z = sum_l r^alpha_l z_l (3^t fresh copies
/// of y^(st)): wherever z(i) = r^j with j <= (s-1)t, z'(i) = r^(j+l) for some 0 <= l <= t.
/// Throws SearchFailed if none exists.
PosVector pre_diameter_witness(std::size_t s, std::size_t t, const Rational& r, const std::vector<int>& alpha);
bool check_pre_diameter(std::size_t s, std::size_t t, const Rational& r, const std::vector<int>& alpha,
                        const PosVector& witness);

struct DiameterSeq {
  std::vector<PosVector> blocks;
  Rational r;
  std::size_t s = 0, t = 0, n = 0;
  std::size_t dimension = 0;  // 3^((s+1)t)
};

/// r is the least fraction with denominator <= 64 satisfying 1 - r^t < eps/4,
/// s the least with r^((s-1)t) < eps/4.
DiameterSeq small_diameter_seq(const Rational& eps, std::size_t t, std::size_t budget = 1u << 20);
bool diameter_params_ok(const Rational& eps, std::size_t t, const Rational& r, std::size_t s);

/// Random positive-sphere point sum a_i b_i with a_i in {0, 1/den, ..., 1}, max a_i = 1.
PosVector sample_sphere_point(const std::vector<PosVector>& blocks, std::mt19937_64& rng, std::size_t den = 64);

enum class StabMode { Guaranteed, Empirical };

struct StabilizeResult {
  std::vector<PosVector> blocks;
  Rational osc;
  bool certified = false;
  std::string plan;
  std::string strategy;
  std::size_t net_points = 0;
};

/// Guaranteed mode throws InsufficientWidth (plan attached) unless the bound
/// evaluates within `ambient`. Empirical mode searches placements in `ambient`.
StabilizeResult stabilize(const LipschitzFn& f, const Rational& C, const Rational& eps, std::size_t m, StabMode mode,
                          std::size_t ambient = 27, std::size_t digit_budget = 100000);

}  // namespace fink
