#include "qam/phase_sweep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>

#include "qam/errors.hpp"
#include "qam/format.hpp"
#include "qam/parallel.hpp"

namespace qam::sweep {

void SweepGrid::validate() const {
  require(std::isfinite(alpha.min) && std::isfinite(alpha.max) && alpha.min < alpha.max,
          "alpha range must satisfy min < max");
  require(std::isfinite(jt.min) && std::isfinite(jt.max) && jt.min < jt.max,
          "Jt range must satisfy min < max");
  require(alpha.min >= 0.0, "alpha range must be non-negative");
  require(jt.min >= 0.0, "Jt range must be non-negative");
  require(alpha_steps >= 2 && jt_steps >= 2, "grid needs at least 2 steps per axis");
  require(std::isfinite(gm), "gM must be finite");
}

double SweepGrid::alpha_at(std::size_t i) const {
  return alpha.min + (double(i) + 0.5) * alpha_width();
}

double SweepGrid::jt_at(std::size_t j) const { return jt.min + (double(j) + 0.5) * jt_width(); }

bool PhaseDiagram::contains(Phase phase) const {
  return std::any_of(cells.begin(), cells.end(), [&](const auto& c) { return c.label == phase; });
}

namespace {

constexpr Phase kPhases[] = {Phase::P, Phase::F, Phase::SG, Phase::F_SG};

// Calls visit(i0, j0, i1, j1) for each adjacent cell pair across `axis`
// whose labels match `pair`, in polyline order.
void for_each_edge(const PhaseDiagram& d, PhasePair pair, Axis axis,
                   const std::function<void(std::size_t, std::size_t, std::size_t, std::size_t)>& visit) {
  const auto na = d.grid.alpha_steps;
  const auto nj = d.grid.jt_steps;
  if (axis == Axis::Alpha) {
    for (std::size_t j = 0; j < nj; ++j)
      for (std::size_t i = 0; i + 1 < na; ++i)
        if (pair.matches(d.at(i, j).label, d.at(i + 1, j).label)) visit(i, j, i + 1, j);
  } else {
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j + 1 < nj; ++j)
        if (pair.matches(d.at(i, j).label, d.at(i, j + 1).label)) visit(i, j, i, j + 1);
  }
}

Polyline midpoints(const PhaseDiagram& d, PhasePair pair, Axis axis) {
  Polyline line;
  for_each_edge(d, pair, axis, [&](auto i0, auto j0, auto i1, auto j1) {
    line.push_back({0.5 * (d.grid.alpha_at(i0) + d.grid.alpha_at(i1)),
                    0.5 * (d.grid.jt_at(j0) + d.grid.jt_at(j1))});
  });
  return line;
}

}  // namespace

PhaseDiagram run_sweep(const SweepGrid& grid, const SweepOptions& options) {
  grid.validate();
  PhaseDiagram d;
  d.grid = grid;
  const std::size_t total = grid.alpha_steps * grid.jt_steps;
  d.cells.assign(total, PhaseLabel{});
  std::vector<std::string> failures(total);

  parallel_for(total, options.jobs, [&](std::size_t k) {
    const mf::FiniteMFParams params{grid.alpha_at(k / grid.jt_steps), grid.jt_at(k % grid.jt_steps),
                                    grid.gm};
    try {
      d.cells[k] = mf::classify_phase(params, options.solver);
    } catch (const std::exception& e) {
      d.cells[k] = PhaseLabel{};
      failures[k] = e.what();
    }
  });

  for (std::size_t k = 0; k < total; ++k) {
    if (d.cells[k].label != Phase::Unresolved) continue;
    d.unresolved.push_back({k / grid.jt_steps, k % grid.jt_steps,
                            failures[k].empty() ? "no stable fixed point found" : failures[k]});
  }

  for (std::size_t a = 0; a < std::size(kPhases); ++a) {
    for (std::size_t b = a + 1; b < std::size(kPhases); ++b) {
      const PhasePair pair{kPhases[a], kPhases[b]};
      for (Axis axis : {Axis::Alpha, Axis::Jt}) {
        auto line = midpoints(d, pair, axis);
        if (!line.empty()) d.boundaries.push_back({pair, axis, std::move(line)});
      }
    }
  }
  return d;
}

Polyline extract_boundary(const PhaseDiagram& diagram, PhasePair pair, Axis axis) {
  auto line = midpoints(diagram, pair, axis);
  if (line.empty()) {
    throw ValidationError("no " + std::string(mf::phase_name(pair.a)) + "/" +
                          std::string(mf::phase_name(pair.b)) + " boundary along the " +
                          (axis == Axis::Alpha ? "alpha" : "Jt") + " axis");
  }
  return line;
}

Polyline refine_boundary(const PhaseDiagram& diagram, PhasePair pair, Axis axis, double tolerance,
                         const mf::FiniteSolverOptions& solver) {
  require(tolerance > 0.0, "refinement tolerance must be positive");
  extract_boundary(diagram, pair, axis);  // validates presence
  const auto& g = diagram.grid;
  Polyline line;
  for_each_edge(diagram, pair, axis, [&](auto i0, auto j0, auto i1, auto j1) {
    const Phase lo_label = diagram.at(i0, j0).label;
    const Phase hi_label = diagram.at(i1, j1).label;
    const bool along_alpha = axis == Axis::Alpha;
    double lo = along_alpha ? g.alpha_at(i0) : g.jt_at(j0);
    double hi = along_alpha ? g.alpha_at(i1) : g.jt_at(j1);
    const double fixed = along_alpha ? g.jt_at(j0) : g.alpha_at(i0);
    while (hi - lo > tolerance) {
      const double mid = 0.5 * (lo + hi);
      const mf::FiniteMFParams params{along_alpha ? mid : fixed, along_alpha ? fixed : mid, g.gm};
      Phase c = Phase::Unresolved;
      try {
        c = mf::classify_phase(params, solver).label;
      } catch (const NumericalError&) {
      }
      if (c == lo_label) {
        lo = mid;
      } else if (c == hi_label) {
        hi = mid;
      } else {
        break;  // a third label sits in between; keep the current bracket
      }
    }
    const double x = 0.5 * (lo + hi);
    line.push_back(along_alpha ? BoundaryPoint{x, fixed} : BoundaryPoint{fixed, x});
  });
  return line;
}

void write_csv(const PhaseDiagram& d, std::ostream& out) {
  out << "alpha,Jt,label,m,r,stable_zero_exists,unresolved\n";
  for (std::size_t i = 0; i < d.grid.alpha_steps; ++i) {
    for (std::size_t j = 0; j < d.grid.jt_steps; ++j) {
      const auto& c = d.at(i, j);
      const bool unresolved = c.label == Phase::Unresolved;
      out << fmt12(d.grid.alpha_at(i)) << ',' << fmt12(d.grid.jt_at(j)) << ','
          << mf::phase_name(c.label) << ',' << fmt12(c.m) << ',' << fmt12(c.r) << ','
          << (c.stable_zero_exists ? 1 : 0) << ',' << (unresolved ? 1 : 0) << '\n';
    }
  }
}

void save_csv(const PhaseDiagram& diagram, const std::filesystem::path& path) {
  std::ofstream f(path);
  require(static_cast<bool>(f), "cannot write " + path.string());
  write_csv(diagram, f);
}

namespace {

const char* phase_color(Phase p) {
  switch (p) {
    case Phase::P: return "#d9d9d9";
    case Phase::F: return "#4e79a7";
    case Phase::SG: return "#f28e2b";
    case Phase::F_SG: return "#59a14f";
    case Phase::Unresolved: return "url(#hatch)";
  }
  return "#000000";
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

}  // namespace

void write_svg(const PhaseDiagram& d, std::ostream& out) {
  constexpr double left = 70, top = 20, plot_w = 600, plot_h = 480, legend_w = 140;
  const double width = left + plot_w + 20 + legend_w;
  const double height = top + plot_h + 60;
  const auto& g = d.grid;
  auto px = [&](double alpha) { return left + (alpha - g.alpha.min) / (g.alpha.max - g.alpha.min) * plot_w; };
  auto py = [&](double jt) { return top + plot_h - (jt - g.jt.min) / (g.jt.max - g.jt.min) * plot_h; };
  const double cw = plot_w / double(g.alpha_steps);
  const double ch = plot_h / double(g.jt_steps);

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
      << num(height) << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n"
      << "<defs><pattern id=\"hatch\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\" "
         "patternTransform=\"rotate(45)\"><rect width=\"6\" height=\"6\" fill=\"#ffffff\"/>"
         "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#d62728\" stroke-width=\"2\"/>"
         "</pattern></defs>\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n<g class=\"cells\">\n";
  for (std::size_t i = 0; i < g.alpha_steps; ++i) {
    for (std::size_t j = 0; j < g.jt_steps; ++j) {
      out << "<rect x=\"" << num(left + double(i) * cw) << "\" y=\""
          << num(top + plot_h - double(j + 1) * ch) << "\" width=\"" << num(cw) << "\" height=\""
          << num(ch) << "\" fill=\"" << phase_color(d.at(i, j).label) << "\"/>\n";
    }
  }
  out << "</g>\n<g class=\"boundaries\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1.5\">\n";
  for (const auto& b : d.boundaries) {
    // Split the midpoint chain wherever consecutive points are not neighbours.
    std::vector<std::vector<BoundaryPoint>> pieces;
    for (const auto& pt : b.points) {
      if (pieces.empty() ||
          std::abs(pt.alpha - pieces.back().back().alpha) > 1.5 * g.alpha_width() ||
          std::abs(pt.jt - pieces.back().back().jt) > 1.5 * g.jt_width()) {
        pieces.emplace_back();
      }
      pieces.back().push_back(pt);
    }
    for (const auto& piece : pieces) {
      out << "<polyline points=\"";
      for (std::size_t k = 0; k < piece.size(); ++k) {
        // Stretch isolated points to a cell-edge tick so they stay visible.
        if (piece.size() == 1) {
          const bool vertical = b.axis == Axis::Alpha;
          const double a0 = vertical ? piece[0].alpha : piece[0].alpha - 0.5 * g.alpha_width();
          const double a1 = vertical ? piece[0].alpha : piece[0].alpha + 0.5 * g.alpha_width();
          const double t0 = vertical ? piece[0].jt - 0.5 * g.jt_width() : piece[0].jt;
          const double t1 = vertical ? piece[0].jt + 0.5 * g.jt_width() : piece[0].jt;
          out << num(px(a0)) << ',' << num(py(t0)) << ' ' << num(px(a1)) << ',' << num(py(t1));
        } else {
          out << (k ? " " : "") << num(px(piece[k].alpha)) << ',' << num(py(piece[k].jt));
        }
      }
      out << "\"/>\n";
    }
  }
  out << "</g>\n";

  out << "<g class=\"axes\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(plot_w)
      << "\" height=\"" << num(plot_h) << "\" fill=\"none\" stroke=\"#000000\"/>\n";
  constexpr int ticks = 6;
  for (int k = 0; k <= ticks; ++k) {
    const double a = g.alpha.min + (g.alpha.max - g.alpha.min) * k / ticks;
    const double t = g.jt.min + (g.jt.max - g.jt.min) * k / ticks;
    out << "<line x1=\"" << num(px(a)) << "\" y1=\"" << num(top + plot_h) << "\" x2=\"" << num(px(a))
        << "\" y2=\"" << num(top + plot_h + 5) << "\" stroke=\"#000000\"/>\n"
        << "<text x=\"" << num(px(a)) << "\" y=\"" << num(top + plot_h + 18)
        << "\" text-anchor=\"middle\">" << fmt12(std::round(a * 1e6) / 1e6) << "</text>\n"
        << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(py(t)) << "\" x2=\"" << num(left)
        << "\" y2=\"" << num(py(t)) << "\" stroke=\"#000000\"/>\n"
        << "<text x=\"" << num(left - 8) << "\" y=\"" << num(py(t) + 4)
        << "\" text-anchor=\"end\">" << fmt12(std::round(t * 1e6) / 1e6) << "</text>\n";
  }
  out << "<text class=\"axis-label\" x=\"" << num(left + plot_w / 2) << "\" y=\"" << num(top + plot_h + 42)
      << "\" text-anchor=\"middle\" font-size=\"16\">α</text>\n"
      << "<text class=\"axis-label\" x=\"20\" y=\"" << num(top + plot_h / 2)
      << "\" text-anchor=\"middle\" font-size=\"16\" transform=\"rotate(-90 20 " << num(top + plot_h / 2)
      << ")\">Jt</text>\n</g>\n";

  std::vector<Phase> legend(std::begin(kPhases), std::end(kPhases));
  if (!d.unresolved.empty()) legend.push_back(Phase::Unresolved);
  out << "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"13\">\n";
  double y = top + 10;
  for (Phase p : legend) {
    out << "<g class=\"legend-entry\"><rect x=\"" << num(left + plot_w + 20) << "\" y=\"" << num(y)
        << "\" width=\"16\" height=\"16\" fill=\"" << phase_color(p)
        << "\" stroke=\"#000000\"/><text x=\"" << num(left + plot_w + 44) << "\" y=\"" << num(y + 13)
        << "\">" << mf::phase_name(p) << "</text></g>\n";
    y += 24;
  }
  out << "</g>\n</svg>\n";
}

void emit_plot(const PhaseDiagram& diagram, const std::filesystem::path& path) {
  std::ofstream f(path);
  require(static_cast<bool>(f), "cannot write " + path.string());
  write_svg(diagram, f);
}

}  // namespace qam::sweep
