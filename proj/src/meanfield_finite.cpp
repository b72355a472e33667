#include "qam/meanfield_finite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <complex>
#include <sstream>

namespace qam::mf {

namespace {

struct Exponentials {
  double e2;  // exp(-2 (Jt)^2 alpha r)
  double e8;  // exp(-8 (Jt)^2 alpha r)
};

Exponentials damping_factors(double r, const FiniteMFParams& p) {
  const double c = p.jt * p.jt * p.alpha * r;
  return {std::exp(-2.0 * c), std::exp(-8.0 * c)};
}

struct Point {
  double m;
  double r;
};

enum class StartOutcome { Converged, Singular, Failed };

StartOutcome iterate(Point& pt, const FiniteMFParams& params, const FiniteSolverOptions& opt) {
  const double lam = opt.damping;
  for (std::size_t it = 0; it < opt.max_iterations; ++it) {
    Residual rhs;
    try {
      rhs = order_parameter_map(pt.m, pt.r, params);
    } catch (const SingularPointError&) {
      return StartOutcome::Singular;
    }
    const Point next{(1.0 - lam) * pt.m + lam * rhs.m, (1.0 - lam) * pt.r + lam * rhs.r};
    if (!std::isfinite(next.m) || !std::isfinite(next.r) || next.r > 1e12) {
      return StartOutcome::Failed;
    }
    const double step = std::max(std::abs(next.m - pt.m), std::abs(next.r - pt.r));
    pt = next;
    if (step < opt.tolerance) return StartOutcome::Converged;
  }
  return StartOutcome::Failed;
}

// Newton on (m, r) - map(m, r). Returns false unless it converges.
bool newton(Point& pt, const FiniteMFParams& params) {
  for (int it = 0; it < 80; ++it) {
    Residual rhs;
    Jacobian2 J;
    try {
      rhs = order_parameter_map(pt.m, pt.r, params);
      J = order_parameter_jacobian(pt.m, pt.r, params);
    } catch (const SingularPointError&) {
      return false;
    }
    const double f0 = pt.m - rhs.m, f1 = pt.r - rhs.r;
    const double a = 1.0 - J.mm, b = -J.mr, c = -J.rm, d = 1.0 - J.rr;
    const double det = a * d - b * c;
    if (!std::isfinite(det) || std::abs(det) < 1e-300) return false;
    double dm = (d * f0 - b * f1) / det;
    double dr = (a * f1 - c * f0) / det;
    // Keep steps modest; the right-hand side oscillates on the scale 1/Jt.
    const double cap = 0.25 + 0.25 * std::abs(pt.r);
    const double scale = std::max({1.0, std::abs(dm) / 0.25, std::abs(dr) / cap});
    dm /= scale;
    dr /= scale;
    pt.m -= dm;
    pt.r -= dr;
    if (!std::isfinite(pt.m) || !std::isfinite(pt.r) || std::abs(pt.m) > 1.5 || pt.r > 1e12)
      return false;
    if (scale == 1.0 && std::abs(dm) < 1e-15 + 1e-13 * std::abs(pt.m) &&
        std::abs(dr) < 1e-15 + 1e-13 * std::abs(pt.r))
      return true;
  }
  return false;
}

}  // namespace

double gaussian_sin_average(double a, double b) {
  require(b >= 0.0, "gaussian_sin_average: b must be non-negative");
  return std::sin(a) * std::exp(-0.5 * b * b);
}

GaussianMoments gaussian_moments(double m, double r, const FiniteMFParams& params) {
  require(r >= 0.0, "gaussian_moments: r must be non-negative");
  const double u = 2.0 * params.jt * (m + params.gm);
  const auto e = damping_factors(r, params);
  // sin^2 = (1 - cos 2u)/2, and the noise width doubles with the argument.
  return {0.5 * (1.0 - std::cos(2.0 * u) * e.e8), std::cos(u) * e.e2};
}

Residual order_parameter_map(double m, double r, const FiniteMFParams& params) {
  const double u = 2.0 * params.jt * (m + params.gm);
  const auto e = damping_factors(r, params);
  const double x = std::cos(u) * e.e2;
  const double denom = 1.0 - 2.0 * params.jt * x;
  if (std::abs(denom) < kSingularGuard) {
    std::ostringstream os;
    os << "singular r-equation denominator at m=" << m << " r=" << r << " alpha=" << params.alpha
       << " Jt=" << params.jt;
    throw SingularPointError(os.str());
  }
  const double sin2 = 0.5 * (1.0 - std::cos(2.0 * u) * e.e8);
  return {std::sin(u) * e.e2, sin2 / (denom * denom)};
}

Residual order_parameter_residual(double m, double r, const FiniteMFParams& params) {
  require(r >= 0.0, "order_parameter_residual: r must be non-negative");
  const auto rhs = order_parameter_map(m, r, params);
  return {m - rhs.m, r - rhs.r};
}

Jacobian2 order_parameter_jacobian(double m, double r, const FiniteMFParams& p) {
  const double k = 2.0 * p.jt;
  const double u = k * (m + p.gm);
  const double c = p.jt * p.jt * p.alpha;
  const auto e = damping_factors(r, p);
  const double su = std::sin(u), cu = std::cos(u);
  const double x = cu * e.e2;
  const double den = 1.0 - k * x;
  if (std::abs(den) < kSingularGuard) throw SingularPointError("singular r-equation denominator");
  const double num = 0.5 * (1.0 - std::cos(2.0 * u) * e.e8);
  const double dnum_dm = k * std::sin(2.0 * u) * e.e8;
  const double dnum_dr = 4.0 * c * std::cos(2.0 * u) * e.e8;
  const double dden_dm = k * k * su * e.e2;  // -k dx/dm
  const double dden_dr = k * 2.0 * c * x;    // -k dx/dr
  const double den2 = den * den, den3 = den2 * den;
  Jacobian2 J;
  J.mm = k * cu * e.e2;
  J.mr = -2.0 * c * su * e.e2;
  J.rm = dnum_dm / den2 - 2.0 * num * dden_dm / den3;
  J.rr = dnum_dr / den2 - 2.0 * num * dden_dr / den3;
  return J;
}

Jacobian2 order_parameter_jacobian_fd(double m, double r, const FiniteMFParams& p, double h) {
  const auto mp = order_parameter_map(m + h, r, p), mm = order_parameter_map(m - h, r, p);
  const auto rp = order_parameter_map(m, r + h, p), rm = order_parameter_map(m, r - h, p);
  return {(mp.m - mm.m) / (2 * h), (rp.m - rm.m) / (2 * h), (mp.r - mm.r) / (2 * h),
          (rp.r - rm.r) / (2 * h)};
}

bool is_stable(double m, double r, const FiniteMFParams& params, const FiniteSolverOptions& opt) {
  const double limit = 1.0 - opt.stability_margin;
  if (opt.criterion == StabilityCriterion::DampedMap)
    return iteration_spectral_radius(m, r, params, opt) < limit;
  const auto J = order_parameter_jacobian_fd(m, r, params, opt.jacobian_step);
  const double lam = opt.stability_damping;
  if (std::abs(1.0 - lam + lam * J.rr) >= limit) return false;
  return J.mm + J.mr * J.rm / (1.0 - J.rr) < limit;
}

double iteration_spectral_radius(double m, double r, const FiniteMFParams& params,
                                 const FiniteSolverOptions& opt) {
  const double lam = opt.stability_damping;
  const auto J = order_parameter_jacobian_fd(m, r, params, opt.jacobian_step);
  const double a = 1.0 - lam + lam * J.mm, b = lam * J.mr;
  const double c = lam * J.rm, d = 1.0 - lam + lam * J.rr;
  const double half_tr = 0.5 * (a + d);
  const double det = a * d - b * c;
  const double disc = half_tr * half_tr - det;
  if (disc < 0.0) return std::sqrt(det);
  const double s = std::sqrt(disc);
  return std::max(std::abs(half_tr + s), std::abs(half_tr - s));
}

namespace {

// Calls on_root(x) for each sign change of f between consecutive grid points,
// refined by bisection. Non-finite values break the bracket.
template <class F, class OnRoot>
void scan_roots(F f, const std::vector<double>& grid, OnRoot on_root) {
  double x0 = grid.front();
  double f0 = f(x0);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double x1 = grid[k];
    const double f1 = f(x1);
    if (std::isfinite(f0) && std::isfinite(f1) && (f0 < 0.0) != (f1 < 0.0)) {
      double a = x0, b = x1, fa = f0;
      for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if (!std::isfinite(fm)) break;
        if ((fm < 0.0) == (fa < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      on_root(0.5 * (a + b));
    }
    x0 = x1;
    f0 = f1;
  }
}

}  // namespace

FiniteSolveReport solve_order_parameters(const FiniteMFParams& params,
                                         const FiniteSolverOptions& opt) {
  require(params.alpha >= 0.0, "alpha must be non-negative");
  require(params.jt >= 0.0, "Jt must be non-negative");
  require(opt.damping > 0.0 && opt.damping <= 1.0, "damping must lie in (0, 1]");

  const bool symmetric = params.gm == 0.0;
  FiniteSolveReport report;

  // Returns the index of the (possibly new) point, or -1 if rejected.
  auto add_point = [&](Point pt, bool from_scan) -> long {
    if (!newton(pt, params)) return -1;  // polish to full precision
    if (symmetric) pt.m = std::abs(pt.m);
    if (std::abs(pt.m) < 1e-13) pt.m = 0.0;
    if (pt.r < 0.0 && pt.r > -1e-12) pt.r = 0.0;
    if (pt.r < 0.0) return -1;
    for (std::size_t k = 0; k < report.points.size(); ++k) {
      const auto& fp = report.points[k];
      if (std::abs(fp.op.m - pt.m) < opt.dedup_radius &&
          std::abs(fp.op.r - pt.r) < opt.dedup_radius * std::max(1.0, pt.r))
        return static_cast<long>(k);
    }
    FiniteFixedPoint fp;
    fp.op.m = pt.m;
    fp.op.r = pt.r;
    const auto moments = gaussian_moments(pt.m, pt.r, params);
    fp.op.x = moments.cos_avg;
    fp.op.v = moments.sin2_avg;
    try {
      fp.residual = order_parameter_residual(pt.m, pt.r, params);
      fp.stable = is_stable(pt.m, pt.r, params, opt);
    } catch (const SingularPointError&) {
      return -1;
    }
    fp.from_scan = from_scan;
    report.points.push_back(fp);
    return static_cast<long>(report.points.size() - 1);
  };

  for (double m0 : opt.m_starts) {
    for (double r0 : opt.r_starts) {
      ++report.starts_total;
      Point pt{m0, r0};
      switch (iterate(pt, params, opt)) {
        case StartOutcome::Singular:
          ++report.starts_singular;
          continue;
        case StartOutcome::Failed:
          ++report.starts_failed;
          continue;
        case StartOutcome::Converged:
          break;
      }
      if (const long k = add_point(pt, false); k >= 0) {
        ++report.points[static_cast<std::size_t>(k)].starts_converged;
      } else {
        ++report.starts_failed;
      }
    }
  }

  if (opt.reduced_scan && params.jt > 0.0) {
    require(opt.scan_points >= 2, "scan_points must be at least 2");
    const double c = params.jt * params.jt * params.alpha;
    const std::size_t N = opt.scan_points;
    auto rhs_r = [&](double m, double r) {
      try {
        return order_parameter_map(m, r, params).r;
      } catch (const SingularPointError&) {
        return std::numeric_limits<double>::quiet_NaN();
      }
    };
    std::vector<double> m_grid;
    for (std::size_t k = 1; k <= N; ++k) {
      const double m = double(k) / double(N);
      m_grid.push_back(m);
      if (!symmetric) m_grid.insert(m_grid.begin(), -m);
    }
    if (c > 0.0) {
      // exp(-2 c r) = m / sin(u) fixes r on the retrieval branch.
      auto eliminated_r = [&](double m) {
        const double e = m / std::sin(2.0 * params.jt * (m + params.gm));
        return e > 0.0 && e <= 1.0 ? -std::log(e) / (2.0 * c) : std::numeric_limits<double>::quiet_NaN();
      };
      scan_roots([&](double m) { const double r = eliminated_r(m); return r - rhs_r(m, r); }, m_grid,
                 [&](double m) { add_point({m, eliminated_r(m)}, true); });
      if (symmetric) {
        std::vector<double> s_grid(N);
        for (std::size_t k = 0; k < N; ++k) s_grid[k] = std::pow(10.0, -10.0 + 13.0 * double(k) / double(N - 1));
        scan_roots([&](double s) { return s / c - rhs_r(0.0, s / c); }, s_grid,
                   [&](double s) { add_point({0.0, s / c}, true); });
      }
    }
    // Noise-free roots. At small load the retrieval root hugs these so closely
    // that the scan above cannot bracket it, but Newton starting here finds it.
    scan_roots([&](double m) { return m - std::sin(2.0 * params.jt * (m + params.gm)); }, m_grid,
               [&](double m) { add_point({m, std::max(0.0, rhs_r(m, 0.0))}, true); });
    if (symmetric) add_point({0.0, 0.0}, true);
  }

  std::sort(report.points.begin(), report.points.end(), [](const auto& a, const auto& b) {
    return a.op.m != b.op.m ? a.op.m < b.op.m : a.op.r < b.op.r;
  });
  return report;
}

std::string_view phase_name(Phase phase) {
  switch (phase) {
    case Phase::P: return "P";
    case Phase::F: return "F";
    case Phase::SG: return "SG";
    case Phase::F_SG: return "F+SG";
    case Phase::Unresolved: return "unresolved";
  }
  return "unresolved";
}

PhaseLabel classify_report(const FiniteSolveReport& report) {
  PhaseLabel out;
  const FiniteFixedPoint* best_retrieval = nullptr;
  const FiniteFixedPoint* zero_p = nullptr;
  const FiniteFixedPoint* zero_sg = nullptr;
  for (const auto& fp : report.points) {
    if (!fp.stable) continue;
    if (std::abs(fp.op.m) > kRetrievalThreshold) {
      if (!best_retrieval || std::abs(fp.op.m) > std::abs(best_retrieval->op.m)) best_retrieval = &fp;
    } else if (fp.op.r > kSpinGlassThreshold) {
      if (!zero_sg) zero_sg = &fp;
    } else if (!zero_p) {
      zero_p = &fp;
    }
  }
  out.stable_retrieval_exists = best_retrieval != nullptr;
  out.stable_zero_exists = zero_p != nullptr || zero_sg != nullptr;
  if (best_retrieval) {
    out.label = zero_sg ? Phase::F_SG : Phase::F;
    // A stable r = 0 point only exists for Jt < 1/2, where no retrieval branch does.
    out.m = best_retrieval->op.m;
    out.r = best_retrieval->op.r;
  } else if (zero_sg) {
    out.label = Phase::SG;
    out.m = zero_sg->op.m;
    out.r = zero_sg->op.r;
  } else if (zero_p) {
    out.label = Phase::P;
    out.m = zero_p->op.m;
    out.r = zero_p->op.r;
  }
  return out;
}

PhaseLabel classify_phase(const FiniteMFParams& params, const FiniteSolverOptions& options) {
  return classify_report(solve_order_parameters(params, options));
}

bool has_stable_retrieval(const FiniteMFParams& params, double threshold,
                          const FiniteSolverOptions& options) {
  const auto report = solve_order_parameters(params, options);
  return std::any_of(report.points.begin(), report.points.end(), [&](const auto& fp) {
    return fp.stable && std::abs(fp.op.m) > threshold;
  });
}

double capacity_at(double jt, double gm, const CapacityOptions& copt,
                   const FiniteSolverOptions& solver) {
  require(jt > 0.0, "capacity_at: Jt must be positive");
  require(copt.resolution > 0.0, "capacity_at: resolution must be positive");
  auto retrieves = [&](double alpha) {
    return has_stable_retrieval({alpha, jt, gm}, kRetrievalThreshold, solver);
  };
  const int steps = static_cast<int>(std::ceil(copt.alpha_max / copt.scan_step));
  int last = -1;
  for (int k = 0; k <= steps; ++k) {
    if (retrieves(std::min(k * copt.scan_step, copt.alpha_max))) last = k;
  }
  if (last < 0) return 0.0;
  double lo = last * copt.scan_step;
  double hi = std::min((last + 1) * copt.scan_step, copt.alpha_max);
  if (lo >= copt.alpha_max) return copt.alpha_max;
  while (hi - lo > copt.resolution) {
    const double mid = 0.5 * (lo + hi);
    (retrieves(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace qam::mf
