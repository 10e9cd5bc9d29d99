// Planar four-bar linkage whose three mobile bars are the q_k of a ternary
// combination at fixed weights p_k = |q_k|^2; the ground bar has length 1.
#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "qmix/combine.hpp"
#include "qmix/common.hpp"

namespace qmix {

/// Bar lengths sorted a <= b <= c with a^2 + b^2 + c^2 = 1.
struct LinkageSpec {
  double a = 0.0;
  double b = 0.0;
  double c = 1.0;

  /// Throws InvalidArgument if unsorted, negative, or off the unit sphere.
  LinkageSpec(double a, double b, double c);
  /// Sorted square roots of a probability triple.
  static LinkageSpec from_weights(const std::array<double, 3>& p);

  /// Slot lengths (|q1|, |q2|, |q3|); slot_of[k] in {0,1,2} picks a, b or c
  /// for slot k. The default puts a, b, c in slots 1, 2, 3.
  std::array<double, 3> assign(std::array<int, 3> slot_of = {0, 1, 2}) const;
};

/// Slot lengths (|q1|, |q2|, |q3|) from a weight triple.
std::array<double, 3> slot_lengths(const std::array<double, 3>& p);

struct LinkageConfig {
  std::array<cplx, 3> q{};

  /// Residual of q1 + q2 + q3 = 1.
  double closure_error() const;
  QTriple to_qtriple() const { return QTriple(q); }
  /// True if some |cos delta_ij| < tol (all three bars nonzero).
  bool is_nested(double tol = 1e-9) const;
  /// (delta12, delta23, delta31); zero where a bar vanishes.
  std::array<double, 3> deltas() const;
};

/// a + d < b + c for sorted a <= b <= c <= d. Throws InvalidArgument if the
/// input is not sorted.
bool grashof(double a, double b, double c, double d);

/// Boundary of the two-orbit region: (1 - c + sqrt(1 + (2 - 3c) c)) / 2.
double b0(double c);

/// 2 iff b > b0(c), else 1.
int orbit_count(const LinkageSpec& spec);

/// Configurations with q1 = |q1| e^{i theta}, in order (+, -) of the side of
/// q2 relative to the chord 1 - q1. Tangent solutions (within 1e-9) are
/// returned once.
std::vector<LinkageConfig> solve_configs(const std::array<double, 3>& lengths, double theta);

struct Orbit {
  /// Closed loop: configs.back() connects to configs.front().
  std::vector<LinkageConfig> configs;
};

/// Traces all connected components of the configuration space. steps >= 12
/// sets the base resolution; adjacent configurations differ by less than
/// 2 pi * 3 / steps in every nonzero bar angle, and the exact nested
/// configurations are inserted.
std::vector<Orbit> orbit_trace(const std::array<double, 3>& lengths, int steps);
inline std::vector<Orbit> orbit_trace(const LinkageSpec& spec, int steps) { return orbit_trace(spec.assign(), steps); }

/// Independent component count: samples configurations by driving each bar
/// on a grid of `resolution` angles and counts components of the proximity
/// graph. resolution >= 360.
int orbit_count_bruteforce(const LinkageSpec& spec, int resolution = 720);

/// CSV with header step,orbit,re_q1,im_q1,re_q2,im_q2,re_q3,im_q3,delta12,delta23,delta31.
void write_orbit_csv(std::ostream& os, const std::vector<Orbit>& orbits);

}  // namespace qmix
