#include "qam/meanfield_single.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace qam::mf {

namespace {

// sin(2 Jt r) / r, continued to 2 Jt at r = 0.
double sin_over(double r, double jt) {
  const double u = 2.0 * jt * r;
  if (std::abs(u) < 1e-4) return 2.0 * jt * (1.0 - u * u / 6.0 + u * u * u * u / 120.0);
  return std::sin(u) / r;
}

// Roots of f on [-1, 1] by sign changes on a uniform grid plus bisection.
template <class F>
std::vector<double> scalar_roots(F f, std::size_t grid) {
  std::vector<double> roots;
  double prev_x = -1.0;
  double prev_f = f(prev_x);
  if (prev_f == 0.0) roots.push_back(prev_x);
  for (std::size_t k = 1; k <= grid; ++k) {
    const double x = -1.0 + 2.0 * double(k) / double(grid);
    const double fx = f(x);
    if (fx == 0.0) {
      roots.push_back(x);
    } else if (prev_f != 0.0 && std::signbit(fx) != std::signbit(prev_f)) {
      double lo = prev_x, hi = x, flo = prev_f;
      for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if (std::signbit(fm) == std::signbit(flo)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_x = x;
    prev_f = fx;
  }
  return roots;
}

}  // namespace

Vec2 single_pattern_map(double m_y, double m_z, const SingleMFParams& p) {
  const double shifted = m_z + p.gm;
  const double s = sin_over(std::hypot(m_y, shifted), p.jt);
  return {-m_y * s, shifted * s};
}

Vec2 single_pattern_residual(double m_y, double m_z, const SingleMFParams& p) {
  const auto t = single_pattern_map(m_y, m_z, p);
  return {m_y - t.y, m_z - t.z};
}

std::array<double, 2> reaction_eigenvalues_real(double m_y, double m_z, const SingleMFParams& p,
                                                double h) {
  const auto yp = single_pattern_map(m_y + h, m_z, p), ym = single_pattern_map(m_y - h, m_z, p);
  const auto zp = single_pattern_map(m_y, m_z + h, p), zm = single_pattern_map(m_y, m_z - h, p);
  const double a = (yp.y - ym.y) / (2 * h), c = (yp.z - ym.z) / (2 * h);
  const double b = (zp.y - zm.y) / (2 * h), d = (zp.z - zm.z) / (2 * h);
  const double half_tr = 0.5 * (a + d);
  const double disc = half_tr * half_tr - (a * d - b * c);
  if (disc < 0.0) return {half_tr, half_tr};
  const double s = std::sqrt(disc);
  return {half_tr - s, half_tr + s};
}

std::vector<MFFixedPoint> solve_single_pattern(const SingleMFParams& params,
                                               const SingleSolverOptions& opt) {
  require(params.jt >= 0.0, "Jt must be non-negative");
  require(opt.damping > 0.0 && opt.damping <= 1.0, "damping must lie in (0, 1]");

  std::vector<Vec2> candidates;

  // Multi-start damped iteration.
  std::vector<double> seeds{0.0, 0.1, -0.1, 0.5, -0.5, 1.0, -1.0};
  std::vector<Vec2> starts;
  for (double y : seeds)
    for (double z : seeds) starts.push_back({y, z});
  const double branch = 0.99 * std::sin(2.0 * params.jt * 0.99);
  for (double s : {branch, -branch}) {
    starts.push_back({0.0, s});
    starts.push_back({s, 0.0});
  }
  const double lam = opt.damping;
  for (auto pt : starts) {
    for (std::size_t it = 0; it < opt.max_iterations; ++it) {
      const auto t = single_pattern_map(pt.y, pt.z, params);
      const Vec2 next{(1 - lam) * pt.y + lam * t.y, (1 - lam) * pt.z + lam * t.z};
      const double step = std::max(std::abs(next.y - pt.y), std::abs(next.z - pt.z));
      pt = next;
      if (step < opt.tolerance) {
        candidates.push_back(pt);
        break;
      }
    }
  }

  // Invariant lines: m_z = sin(2Jt(m_z + gM)) on m_y = 0, and for gM = 0
  // m_y = -sin(2Jt m_y) on m_z = 0.
  const double jt = params.jt, gm = params.gm;
  for (double z : scalar_roots([&](double m) { return m - std::sin(2 * jt * (m + gm)); },
                               opt.scalar_grid))
    candidates.push_back({0.0, z});
  // Off that line the m_y equation forces sin(2Jt|m|) = -|m|, and then the
  // m_z equation gives m_z = -gM/2.
  for (double rho : scalar_roots([&](double m) { return m + std::sin(2 * jt * m); }, opt.scalar_grid)) {
    if (rho <= 0.5 * std::abs(gm)) continue;
    const double y = std::sqrt(rho * rho - 0.25 * gm * gm);
    candidates.push_back({y, -0.5 * gm});
    candidates.push_back({-y, -0.5 * gm});
  }

  std::vector<MFFixedPoint> out;
  for (const auto& c : candidates) {
    const auto res = single_pattern_residual(c.y, c.z, params);
    if (std::max(std::abs(res.y), std::abs(res.z)) > 1e-9) continue;
    const bool dup = std::any_of(out.begin(), out.end(), [&](const MFFixedPoint& fp) {
      return std::abs(fp.m_y - c.y) < opt.dedup_radius && std::abs(fp.m_z - c.z) < opt.dedup_radius;
    });
    if (dup) continue;
    MFFixedPoint fp;
    fp.m_y = std::abs(c.y) < 1e-14 ? 0.0 : c.y;
    fp.m_z = std::abs(c.z) < 1e-14 ? 0.0 : c.z;
    fp.magnitude = std::hypot(fp.m_y, fp.m_z + gm);
    const auto eig = reaction_eigenvalues_real(fp.m_y, fp.m_z, params, opt.jacobian_step);
    const bool local = eig[0] < 1.0 - opt.stability_margin && eig[1] < 1.0 - opt.stability_margin;
    if (!local) {
      fp.stability = Stability::Unstable;
    } else {
      fp.stability = std::abs(fp.m_y) > opt.dedup_radius ? Stability::Metastable : Stability::Stable;
    }
    out.push_back(fp);
  }
  if (out.empty()) throw NumericalError("no fixed point converged from any start");
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.m_z != b.m_z ? a.m_z < b.m_z : a.m_y < b.m_y;
  });
  return out;
}

BifurcationScan bifurcation_scan(double jt_min, double jt_max, std::size_t steps, double gm,
                                 const SingleSolverOptions& options) {
  require(jt_min < jt_max, "bifurcation_scan: Jt_min must be below Jt_max");
  require(steps >= 2, "bifurcation_scan: need at least 2 steps");
  require(jt_min >= 0.0, "bifurcation_scan: Jt must be non-negative");
  BifurcationScan scan;
  scan.critical_jt = std::numeric_limits<double>::quiet_NaN();
  const double zero_tol = 1e-6;
  bool seen_zero_row = false;
  double last_zero = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double jt = jt_min + (jt_max - jt_min) * double(k) / double(steps - 1);
    BifurcationRow row{jt, {}};
    for (const auto& fp : solve_single_pattern({jt, gm}, options))
      if (fp.stable()) row.stable_m_z.push_back(fp.m_z);
    std::sort(row.stable_m_z.begin(), row.stable_m_z.end());
    const bool all_zero = std::all_of(row.stable_m_z.begin(), row.stable_m_z.end(),
                                      [&](double m) { return std::abs(m) < zero_tol; });
    if (all_zero) {
      seen_zero_row = true;
      last_zero = jt;
    } else if (seen_zero_row && std::isnan(scan.critical_jt)) {
      scan.critical_jt = 0.5 * (last_zero + jt);
    }
    scan.rows.push_back(std::move(row));
  }
  return scan;
}

std::array<double, 2> activation_probability(double h, double jt) {
  // Built from |sin| so that f(h) + f(-h) == 1 holds bit for bit: the larger
  // probability lies in [1/2, 1] where 1 - p is exact.
  const double s = std::sin(2.0 * jt * h);
  const double hi = 0.5 * (1.0 + std::abs(s));
  const double lo = 1.0 - hi;
  return s >= 0.0 ? std::array<double, 2>{hi, lo} : std::array<double, 2>{lo, hi};
}

std::array<std::array<double, 2>, 2> mf_rotation(double h, double jt) {
  const double c = std::cos(jt * h), s = std::sin(jt * h);
  return {{{c, s}, {-s, c}}};
}

std::array<double, 2> rotated_uniform_spinor(double h, double jt) {
  const auto r = mf_rotation(h, jt);
  const double a = 1.0 / std::sqrt(2.0);
  return {r[0][0] * a + r[0][1] * a, r[1][0] * a + r[1][1] * a};
}

}  // namespace qam::mf
