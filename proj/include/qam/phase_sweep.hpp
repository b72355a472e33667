#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qam/meanfield_finite.hpp"

namespace qam::sweep {

using mf::Phase;
using mf::PhaseLabel;

struct Range {
  double min = 0.0;
  double max = 1.0;
};

/// Rectangular (alpha, Jt) grid sampled at cell centres.
struct SweepGrid {
  Range alpha{0.0, 1.2};
  Range jt{0.0, 12.0};
  std::size_t alpha_steps = 60;
  std::size_t jt_steps = 60;
  double gm = 0.0;

  void validate() const;
  double alpha_at(std::size_t i) const;
  double jt_at(std::size_t j) const;
  double alpha_width() const { return (alpha.max - alpha.min) / double(alpha_steps); }
  double jt_width() const { return (jt.max - jt.min) / double(jt_steps); }
};

struct PhasePair {
  Phase a;
  Phase b;
  // Unordered comparison.
  bool matches(Phase x, Phase y) const { return (x == a && y == b) || (x == b && y == a); }
};

/// Which grid direction the two cells straddling a boundary point differ in.
enum class Axis { Alpha, Jt };

struct BoundaryPoint {
  double alpha;
  double jt;
};
using Polyline = std::vector<BoundaryPoint>;

struct Boundary {
  PhasePair pair;
  Axis axis;
  Polyline points;
};

struct UnresolvedCell {
  std::size_t i;  // alpha index
  std::size_t j;  // Jt index
  std::string reason;
};

struct PhaseDiagram {
  SweepGrid grid;
  std::vector<PhaseLabel> cells;  // index i * jt_steps + j
  std::vector<Boundary> boundaries;
  std::vector<UnresolvedCell> unresolved;

  const PhaseLabel& at(std::size_t i, std::size_t j) const { return cells[i * grid.jt_steps + j]; }
  bool contains(Phase phase) const;
};

struct SweepOptions {
  std::size_t jobs = 1;  // 0 selects the hardware thread count
  mf::FiniteSolverOptions solver{};
};

/// Classify every cell. Per-cell failures end up in `unresolved`.
PhaseDiagram run_sweep(const SweepGrid& grid, const SweepOptions& options = {});

/// Midpoints between horizontally (Axis::Alpha) or vertically (Axis::Jt)
/// adjacent cells carrying the two labels of `pair`. Points are ordered by
/// the coordinate transverse to `axis`, then along it.
/// Throws ValidationError if the pair never touches along that axis.
Polyline extract_boundary(const PhaseDiagram& diagram, PhasePair pair, Axis axis);

/// Move each boundary point to within `tolerance` of the label change by
/// bisecting between the two neighbouring cell centres along `axis`.
Polyline refine_boundary(const PhaseDiagram& diagram, PhasePair pair, Axis axis,
                         double tolerance, const mf::FiniteSolverOptions& solver = {});

void write_csv(const PhaseDiagram& diagram, std::ostream& out);
void save_csv(const PhaseDiagram& diagram, const std::filesystem::path& path);

void write_svg(const PhaseDiagram& diagram, std::ostream& out);
/// Render the diagram as a standalone SVG file.
void emit_plot(const PhaseDiagram& diagram, const std::filesystem::path& path);

}  // namespace qam::sweep
