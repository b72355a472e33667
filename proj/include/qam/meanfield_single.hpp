#pragma once

#include <array>
#include <vector>

#include "qam/errors.hpp"

namespace qam::mf {

/// Single stored pattern. `gm` is the external drive (g/J) M^z.
struct SingleMFParams {
  double jt = 0.0;
  double gm = 0.0;
};

enum class Stability {
  Stable,
  // Locally stable, but off the m_y = 0 subspace that the dynamics started
  // from the x-aligned state never leaves.
  Metastable,
  Unstable,
};

struct MFFixedPoint {
  double m_y = 0.0;
  double m_z = 0.0;
  Stability stability = Stability::Unstable;
  double magnitude = 0.0;  // sqrt(m_y^2 + (m_z + gM)^2)

  bool stable() const { return stability == Stability::Stable; }
  bool locally_stable() const { return stability != Stability::Unstable; }
};

struct Vec2 {
  double y = 0.0;
  double z = 0.0;
};

/// Right-hand side of the overlap equations:
///   m_y <- -(m_y/|m|) sin(2Jt|m|),  m_z <- ((m_z + gM)/|m|) sin(2Jt|m|),
/// with sin(2Jt|m|)/|m| -> 2Jt continued through |m| = 0.
Vec2 single_pattern_map(double m_y, double m_z, const SingleMFParams& params);

/// Left-minus-right of the overlap equations.
Vec2 single_pattern_residual(double m_y, double m_z, const SingleMFParams& params);

struct SingleSolverOptions {
  double damping = 0.5;
  double tolerance = 1e-12;
  std::size_t max_iterations = 2000;
  double dedup_radius = 1e-6;
  double jacobian_step = 1e-6;
  double stability_margin = 1e-9;
  // Grid used to bracket roots of the reduced scalar equations.
  std::size_t scalar_grid = 20000;
};

/// Eigenvalues (real parts for a complex pair) of the central-difference
/// Jacobian of the map at a point.
std::array<double, 2> reaction_eigenvalues_real(double m_y, double m_z,
                                                const SingleMFParams& params,
                                                double step = 1e-6);

/// All fixed points from the multi-start damped iteration plus the roots of
/// the reduced scalar equations on and off the m_y = 0 line, deduplicated and
/// labelled. Throws NumericalError if nothing
/// converges.
std::vector<MFFixedPoint> solve_single_pattern(const SingleMFParams& params,
                                               const SingleSolverOptions& options = {});

struct BifurcationRow {
  double jt = 0.0;
  std::vector<double> stable_m_z;  // ascending
};

struct BifurcationScan {
  std::vector<BifurcationRow> rows;
  // Midpoint of the last all-zero and first non-zero grid cell; NaN if the
  // scan never changes from zero to non-zero.
  double critical_jt = 0.0;
};

BifurcationScan bifurcation_scan(double jt_min, double jt_max, std::size_t steps, double gm,
                                 const SingleSolverOptions& options = {});

/// (p_+, p_-) = ((1 + sin 2Jt h)/2, (1 - sin 2Jt h)/2).
std::array<double, 2> activation_probability(double h, double jt);

/// Rotation block [[cos(Jt h), sin(Jt h)], [-sin(Jt h), cos(Jt h)]], row-major.
std::array<std::array<double, 2>, 2> mf_rotation(double h, double jt);

/// Rotation applied to the x-aligned spinor (1, 1)/sqrt(2).
std::array<double, 2> rotated_uniform_spinor(double h, double jt);

}  // namespace qam::mf
