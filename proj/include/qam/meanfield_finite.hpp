#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "qam/errors.hpp"

namespace qam::mf {

/// Parameters of the finite-density order-parameter equations.
/// `gm` is the external drive (g/J)*M on the condensed pattern.
struct FiniteMFParams {
  double alpha = 0.0;
  double jt = 0.0;
  double gm = 0.0;
};

/// Order parameters at a fixed point. `x` is the Gaussian cosine moment and
/// `v` the sin^2 moment, which must equal (1 - 2 Jt x)^2 r at a solution.
struct OrderParameters {
  double m = 0.0;
  double r = 0.0;
  double x = 0.0;
  double v = 0.0;
};

struct GaussianMoments {
  double sin2_avg = 0.0;
  double cos_avg = 0.0;
};

struct Residual {
  double m = 0.0;
  double r = 0.0;
};

/// Thrown when the r-equation denominator |1 - 2 Jt x| falls below the guard.
class SingularPointError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

inline constexpr double kSingularGuard = 1e-8;

/// E_z[sin(a + b z)] for z ~ N(0, 1), i.e. sin(a) exp(-b^2 / 2).
double gaussian_sin_average(double a, double b);

/// Closed-form sin^2 and cos averages of 2Jt(m + gM + sqrt(alpha r) z).
GaussianMoments gaussian_moments(double m, double r, const FiniteMFParams& params);

/// Right-hand sides of the coupled (m, r) equations. Throws SingularPointError
/// when the denominator guard trips. Does not require r >= 0 so that finite
/// differences straddling r = 0 stay well defined.
Residual order_parameter_map(double m, double r, const FiniteMFParams& params);

/// Left-minus-right of the coupled equations.
Residual order_parameter_residual(double m, double r, const FiniteMFParams& params);

/// How a fixed point is labelled stable.
enum class StabilityCriterion {
  // r is slaved to m: it must be an attracting fixed point of the damped
  // r-update at fixed m, and the reduced reaction slope dm'/dm (with r
  // following) must stay below 1.
  SlavedNoise,
  // Spectral radius of the damped two-dimensional iteration map below 1.
  DampedMap,
};

struct Jacobian2 {
  double mm = 0.0, mr = 0.0;  // d(m')/dm, d(m')/dr
  double rm = 0.0, rr = 0.0;  // d(r')/dm, d(r')/dr
};

/// Analytic Jacobian of order_parameter_map.
Jacobian2 order_parameter_jacobian(double m, double r, const FiniteMFParams& params);
/// Central-difference Jacobian of order_parameter_map with step h.
Jacobian2 order_parameter_jacobian_fd(double m, double r, const FiniteMFParams& params, double h);

struct FiniteSolverOptions {
  StabilityCriterion criterion = StabilityCriterion::SlavedNoise;
  double damping = 0.5;
  double tolerance = 1e-12;
  std::size_t max_iterations = 200000;
  double dedup_radius = 1e-6;
  double jacobian_step = 1e-6;
  double stability_margin = 1e-9;
  std::vector<double> m_starts{0.0, 0.05, 0.2, 0.5, 0.9, 1.0};
  std::vector<double> r_starts{0.0, 0.1, 0.5, 1.0, 2.0};
  // Damping of the map whose linearisation decides stability. Kept apart from
  // `damping` so that labels do not depend on how the solver iterates.
  double stability_damping = 0.5;
  // Sign-change scan of the reduced scalar equations (r eliminated through
  // the m-equation, or m = 0), which also finds the fixed points that repel
  // the damped iteration.
  bool reduced_scan = true;
  std::size_t scan_points = 20000;
};

struct FiniteFixedPoint {
  OrderParameters op;
  bool stable = false;
  Residual residual;
  // Number of multi-start seeds whose damped iteration landed on this point.
  int starts_converged = 0;
  bool from_scan = false;  // first found by the reduced-equation scan
};

struct FiniteSolveReport {
  std::vector<FiniteFixedPoint> points;
  int starts_total = 0;
  int starts_singular = 0;
  int starts_failed = 0;  // hit the iteration cap or diverged
};

/// Fixed points from the damped multi-start iteration and (optionally) the
/// reduced-equation scan, Newton-polished, deduplicated and labelled. With gM = 0 each +-m pair is
/// reported once, as m >= 0. Points with r < 0 are discarded.
FiniteSolveReport solve_order_parameters(const FiniteMFParams& params,
                                         const FiniteSolverOptions& options = {});

/// Spectral radius of the central-difference Jacobian of the damped map.
double iteration_spectral_radius(double m, double r, const FiniteMFParams& params,
                                 const FiniteSolverOptions& options = {});

/// Stability label under options.criterion (central-difference Jacobian).
bool is_stable(double m, double r, const FiniteMFParams& params,
               const FiniteSolverOptions& options = {});

enum class Phase { P, F, SG, F_SG, Unresolved };

std::string_view phase_name(Phase phase);

struct PhaseLabel {
  Phase label = Phase::Unresolved;
  // Representative order parameters: the best retrieval solution for F/F_SG,
  // the stable m = 0 solution otherwise.
  double m = 0.0;
  double r = 0.0;
  bool stable_zero_exists = false;
  bool stable_retrieval_exists = false;
};

inline constexpr double kRetrievalThreshold = 1e-3;
inline constexpr double kSpinGlassThreshold = 1e-9;

PhaseLabel classify_report(const FiniteSolveReport& report);
PhaseLabel classify_phase(const FiniteMFParams& params,
                          const FiniteSolverOptions& options = {});

/// True if a stable fixed point with m > threshold exists.
bool has_stable_retrieval(const FiniteMFParams& params, double threshold = kRetrievalThreshold,
                          const FiniteSolverOptions& options = {});

struct CapacityOptions {
  double resolution = 0.005;
  double alpha_max = 1.5;
  // Coarse scan step used to bracket the last retrieval/no-retrieval change.
  double scan_step = 0.025;
};

/// Largest alpha with a stable m > 1e-3 fixed point, to `resolution`.
/// Returns 0 if no retrieval exists even at alpha = 0.
double capacity_at(double jt, double gm, const CapacityOptions& options = {},
                   const FiniteSolverOptions& solver = {});

}  // namespace qam::mf
