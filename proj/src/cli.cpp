#include "qam/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <string_view>

#include "qam/classical_hopfield.hpp"
#include "qam/errors.hpp"
#include "qam/exact_quantum.hpp"
#include "qam/format.hpp"
#include "qam/meanfield_finite.hpp"
#include "qam/meanfield_single.hpp"
#include "qam/parallel.hpp"
#include "qam/patterns.hpp"
#include "qam/phase_sweep.hpp"

namespace qam::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Flags every subcommand understands.
struct Shared {
  std::string out = "-";
  std::string config;
  std::size_t jobs = 1;
  std::uint64_t seed = 0;
};

void add_shared(CLI::App* sub, Shared& s) {
  sub->add_option("--out", s.out, "Output path ('-' writes to standard output)");
  sub->add_option("--config", s.config, "key=value file; command-line flags take precedence");
  sub->add_option("--jobs", s.jobs, "Worker threads (0 uses every hardware thread)");
  sub->add_option("--seed", s.seed, "Seed for every random draw");
}

// Destination chosen by --out. Opened before any computation starts so an
// unwritable path is reported as a validation error.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path == "-") {
      os_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path);
    require(static_cast<bool>(*file_), "cannot write " + path);
    os_ = file_.get();
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
};

// Runs fn(k) for each k and rethrows the first failure in index order.
template <class T, class Fn>
std::vector<T> collect(std::size_t count, std::size_t jobs, Fn fn) {
  std::vector<T> out(count);
  std::vector<std::exception_ptr> errors(count);
  parallel_for(count, jobs, [&](std::size_t k) {
    try {
      out[k] = fn(k);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  });
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t steps) {
  std::vector<double> v(steps);
  for (std::size_t k = 0; k < steps; ++k)
    v[k] = steps == 1 ? lo : lo + (hi - lo) * double(k) / double(steps - 1);
  return v;
}

void require_range(double lo, double hi, std::size_t steps, const std::string& what) {
  require(std::isfinite(lo) && std::isfinite(hi), what + " range must be finite");
  require(steps >= 1, "steps must be at least 1");
  require(steps == 1 ? lo <= hi : lo < hi, what + " range needs min < max");
}

Normalization parse_normalization(const std::string& s) {
  return s == "n" ? Normalization::OverN : Normalization::OverNMinus1;
}

mf::StabilityCriterion parse_criterion(const std::string& s) {
  return s == "damped-map" ? mf::StabilityCriterion::DampedMap : mf::StabilityCriterion::SlavedNoise;
}

const auto kNormalizations = CLI::IsMember({"n-1", "n"});
const auto kCriteria = CLI::IsMember({"slaved-noise", "damped-map"});

// ---------------------------------------------------------------- classical

struct ClassicalArgs {
  std::size_t n = 100;
  std::size_t p = 5;
  std::size_t flips = 10;
  std::size_t target = 1;
  std::size_t max_sweeps = 100;
  std::string mode = "sequential";
  std::string normalization = "n-1";
  std::string patterns;
};

void add_classical(CLI::App* sub, ClassicalArgs& a) {
  sub->add_option("--n", a.n, "Number of units");
  sub->add_option("--p", a.p, "Number of stored patterns");
  sub->add_option("--flips", a.flips, "Bits flipped in the target pattern to form the input");
  sub->add_option("--target", a.target, "1-based index of the pattern to corrupt");
  sub->add_option("--max-sweeps", a.max_sweeps, "Sweep budget");
  sub->add_option("--mode", a.mode, "Update mode")->check(CLI::IsMember({"sequential", "parallel"}));
  sub->add_option("--normalization", a.normalization, "Hebb denominator")->check(kNormalizations);
  sub->add_option("--patterns", a.patterns, "Pattern file (overrides --n/--p)");
}

int run_classical(const ClassicalArgs& a, const Shared& s, std::ostream& out) {
  const PatternSet patterns = a.patterns.empty() ? generate_random_patterns(a.n, a.p, s.seed)
                                                 : load_patterns(a.patterns);
  require(a.target >= 1 && a.target <= patterns.p(), "--target must lie in [1, p]");
  require(a.flips <= patterns.n(), "--flips exceeds n");
  require(a.max_sweeps >= 1, "--max-sweeps must be at least 1");
  Sink sink(s.out, out);

  Rng rng(s.seed + 1);
  const auto positions = random_positions(patterns.n(), a.flips, rng);
  const auto input = patterns[a.target - 1].with_flips(positions);
  const auto weights = hebb_weights(patterns, parse_normalization(a.normalization));
  const auto mode = a.mode == "parallel" ? classical::UpdateMode::Parallel : classical::UpdateMode::Sequential;
  const auto result = classical::retrieve(weights, classical::ClassicalState::from(input), a.max_sweeps, {}, mode);

  auto& os = *sink;
  os << "sweep";
  for (std::size_t mu = 1; mu <= patterns.p(); ++mu) os << ",overlap_mu_" << mu;
  os << '\n';
  for (std::size_t k = 0; k < result.trace.size(); ++k) {
    os << k;
    for (const auto& pat : patterns.patterns()) os << ',' << fmt12(overlap(result.trace[k], pat));
    os << '\n';
  }
  return kExitOk;
}

// ----------------------------------------------------------------- simulate

struct SimulateArgs {
  std::size_t n = 10;
  std::size_t p = 1;
  double J = 1.0;
  double g_over_j = 0.1;
  double jt_max = 1.2;
  std::size_t steps = 48;
  std::size_t flips = 0;
  std::size_t max_qubits = quantum::kDefaultMaxQubits;
  std::string normalization = "n";
  std::string patterns;
};

void add_simulate(CLI::App* sub, SimulateArgs& a) {
  sub->add_option("--n", a.n, "Number of qubits");
  sub->add_option("--p", a.p, "Number of stored patterns");
  sub->add_option("--J", a.J, "Coupling J (> 0)");
  sub->add_option("--g-over-j", a.g_over_j, "External field strength g/J");
  sub->add_option("--jt-max", a.jt_max, "Final effective coupling Jt");
  sub->add_option("--steps", a.steps, "Number of time points from t = 0 to t = jt-max/J");
  sub->add_option("--flips", a.flips, "Bits of pattern 1 flipped to form the external stimulus");
  sub->add_option("--max-qubits", a.max_qubits, "Refuse larger systems");
  sub->add_option("--normalization", a.normalization, "Hebb denominator")->check(kNormalizations);
  sub->add_option("--patterns", a.patterns, "Pattern file (overrides --n/--p)");
}

int run_simulate(const SimulateArgs& a, const Shared& s, std::ostream& out, std::ostream& err) {
  require(a.J > 0.0 && std::isfinite(a.J), "--J must be positive");
  require(std::isfinite(a.g_over_j), "--g-over-j must be finite");
  require(a.jt_max > 0.0 && std::isfinite(a.jt_max), "--jt-max must be positive");
  require(a.steps >= 2, "--steps must be at least 2");
  const PatternSet patterns = a.patterns.empty() ? generate_random_patterns(a.n, a.p, s.seed)
                                                 : load_patterns(a.patterns);
  require(patterns.n() <= a.max_qubits,
          "n = " + std::to_string(patterns.n()) + " exceeds --max-qubits " + std::to_string(a.max_qubits));
  require(a.flips <= patterns.n(), "--flips exceeds n");
  Sink sink(s.out, out);

  const std::uint64_t dim = std::uint64_t{1} << patterns.n();
  err << "# memory estimate: " << fmt12(double(8 * dim * dim) / (1 << 20))
      << " MiB for the propagator, dense complex operator would need "
      << fmt12(double(quantum::dense_operator_bytes(patterns.n())) / (1 << 20)) << " MiB\n";

  Rng rng(s.seed + 1);
  const auto external = patterns[0].with_flips(random_positions(patterns.n(), a.flips, rng));
  const auto jt_grid = linspace(0.0, a.jt_max, a.steps);
  std::vector<double> t_grid(jt_grid.size());
  std::transform(jt_grid.begin(), jt_grid.end(), t_grid.begin(), [&](double jt) { return jt / a.J; });
  const auto run = quantum::retrieval_run(patterns, external, a.J, a.g_over_j * a.J, t_grid,
                                          parse_normalization(a.normalization), a.max_qubits);

  auto& os = *sink;
  os << "t,Jt,m_y,m_z,norm,energy\n";
  const auto& tr = run.trace;
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    os << fmt12(tr.times[k]) << ',' << fmt12(jt_grid[k]) << ',' << fmt12(tr.m_y[k]) << ','
       << fmt12(tr.m_z[k]) << ',' << fmt12(tr.norm[k]) << ',' << fmt12(tr.energy[k]) << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------- mf-single

struct MFSingleArgs {
  double jt_min = 0.3;
  double jt_max = 0.7;
  std::size_t steps = 400;
  double gm = 0.0;
};

void add_mf_single(CLI::App* sub, MFSingleArgs& a) {
  sub->add_option("--jt-min", a.jt_min, "First Jt");
  sub->add_option("--jt-max", a.jt_max, "Last Jt");
  sub->add_option("--steps", a.steps, "Number of Jt values (endpoints included)");
  sub->add_option("--gm", a.gm, "External drive (g/J) M^z");
}

const char* stability_name(mf::Stability s) {
  switch (s) {
    case mf::Stability::Stable: return "stable";
    case mf::Stability::Metastable: return "metastable";
    case mf::Stability::Unstable: return "unstable";
  }
  return "unstable";
}

int run_mf_single(const MFSingleArgs& a, const Shared& s, std::ostream& out) {
  require_range(a.jt_min, a.jt_max, a.steps, "Jt");
  require(a.jt_min >= 0.0, "Jt must be non-negative");
  require(std::isfinite(a.gm), "--gm must be finite");
  Sink sink(s.out, out);

  const auto jts = linspace(a.jt_min, a.jt_max, a.steps);
  const auto solutions = collect<std::vector<mf::MFFixedPoint>>(
      jts.size(), s.jobs, [&](std::size_t k) { return mf::solve_single_pattern({jts[k], a.gm}); });

  auto& os = *sink;
  os << "Jt,gM,branch_id,m_y,m_z,stable\n";
  for (std::size_t k = 0; k < jts.size(); ++k) {
    for (std::size_t b = 0; b < solutions[k].size(); ++b) {
      const auto& fp = solutions[k][b];
      os << fmt12(jts[k]) << ',' << fmt12(a.gm) << ',' << b << ',' << fmt12(fp.m_y) << ','
         << fmt12(fp.m_z) << ',' << stability_name(fp.stability) << '\n';
    }
  }
  return kExitOk;
}

// ----------------------------------------------------------------- mf-solve

struct MFSolveArgs {
  double alpha = 0.05;
  double jt = 1.0;
  double gm = 0.0;
  std::string criterion = "slaved-noise";
};

void add_mf_solve(CLI::App* sub, MFSolveArgs& a) {
  sub->add_option("--alpha", a.alpha, "Loading factor p/n");
  sub->add_option("--jt", a.jt, "Effective coupling Jt");
  sub->add_option("--gm", a.gm, "External drive (g/J) M^z");
  sub->add_option("--criterion", a.criterion, "Stability criterion")->check(kCriteria);
}

int run_mf_solve(const MFSolveArgs& a, const Shared& s, std::ostream& out, std::ostream& err) {
  require(a.alpha >= 0.0 && std::isfinite(a.alpha), "--alpha must be non-negative");
  require(a.jt >= 0.0 && std::isfinite(a.jt), "--jt must be non-negative");
  require(std::isfinite(a.gm), "--gm must be finite");
  Sink sink(s.out, out);

  mf::FiniteSolverOptions opt;
  opt.criterion = parse_criterion(a.criterion);
  const auto report = mf::solve_order_parameters({a.alpha, a.jt, a.gm}, opt);
  err << "# starts: " << report.starts_total << " total, " << report.starts_singular << " singular, "
      << report.starts_failed << " failed; phase " << mf::phase_name(mf::classify_report(report).label)
      << '\n';

  auto& os = *sink;
  os << "alpha,Jt,gM,m,r,stable,residual_m,residual_r,starts_converged\n";
  for (const auto& fp : report.points) {
    os << fmt12(a.alpha) << ',' << fmt12(a.jt) << ',' << fmt12(a.gm) << ',' << fmt12(fp.op.m) << ','
       << fmt12(fp.op.r) << ',' << (fp.stable ? 1 : 0) << ',' << fmt12(fp.residual.m) << ','
       << fmt12(fp.residual.r) << ',' << fp.starts_converged << '\n';
  }
  return kExitOk;
}

// -------------------------------------------------------------------- sweep

struct SweepArgs {
  double alpha_min = 0.0;
  double alpha_max = 1.2;
  std::size_t alpha_steps = 60;
  double jt_min = 0.0;
  double jt_max = 12.0;
  std::size_t jt_steps = 60;
  double gm = 0.0;
  std::string format = "csv";
  std::string plot;
  std::string boundaries;
  bool refine = false;
  double refine_tol = 1e-3;
  std::string criterion = "slaved-noise";
};

void add_sweep(CLI::App* sub, SweepArgs& a) {
  sub->add_option("--alpha-min", a.alpha_min, "Lower alpha edge");
  sub->add_option("--alpha-max", a.alpha_max, "Upper alpha edge");
  sub->add_option("--alpha-steps", a.alpha_steps, "Cells along alpha");
  sub->add_option("--jt-min", a.jt_min, "Lower Jt edge");
  sub->add_option("--jt-max", a.jt_max, "Upper Jt edge");
  sub->add_option("--jt-steps", a.jt_steps, "Cells along Jt");
  sub->add_option("--gm", a.gm, "External drive (g/J) M^z");
  sub->add_option("--format", a.format, "What --out receives")->check(CLI::IsMember({"csv", "svg"}));
  sub->add_option("--plot", a.plot, "Also write the SVG plot here");
  sub->add_option("--boundaries", a.boundaries, "Write boundary points as CSV here");
  sub->add_flag("--refine", a.refine, "Bisect each boundary point along its axis");
  sub->add_option("--refine-tol", a.refine_tol, "Bisection tolerance for --refine");
  sub->add_option("--criterion", a.criterion, "Stability criterion")->check(kCriteria);
}

int run_sweep_cmd(const SweepArgs& a, const Shared& s, std::ostream& out, std::ostream& err) {
  sweep::SweepGrid grid;
  grid.alpha = {a.alpha_min, a.alpha_max};
  grid.jt = {a.jt_min, a.jt_max};
  grid.alpha_steps = a.alpha_steps;
  grid.jt_steps = a.jt_steps;
  grid.gm = a.gm;
  grid.validate();
  require(a.refine_tol > 0.0, "--refine-tol must be positive");
  Sink sink(s.out, out);
  std::unique_ptr<Sink> plot_sink, boundary_sink;
  if (!a.plot.empty()) plot_sink = std::make_unique<Sink>(a.plot, out);
  if (!a.boundaries.empty()) boundary_sink = std::make_unique<Sink>(a.boundaries, out);

  sweep::SweepOptions opt;
  opt.jobs = s.jobs;
  opt.solver.criterion = parse_criterion(a.criterion);
  const auto diagram = sweep::run_sweep(grid, opt);

  std::map<std::string_view, std::size_t> counts;
  for (const auto& c : diagram.cells) ++counts[mf::phase_name(c.label)];
  err << "# cells:";
  for (const auto& [name, k] : counts) err << ' ' << name << '=' << k;
  err << '\n';

  if (a.format == "svg") {
    sweep::write_svg(diagram, *sink);
  } else {
    sweep::write_csv(diagram, *sink);
  }
  if (plot_sink) sweep::write_svg(diagram, **plot_sink);
  if (boundary_sink) {
    auto& os = **boundary_sink;
    os << "phase_a,phase_b,axis,alpha,Jt\n";
    for (const auto& b : diagram.boundaries) {
      const auto points =
          a.refine ? sweep::refine_boundary(diagram, b.pair, b.axis, a.refine_tol, opt.solver) : b.points;
      for (const auto& pt : points) {
        os << mf::phase_name(b.pair.a) << ',' << mf::phase_name(b.pair.b) << ','
           << (b.axis == sweep::Axis::Alpha ? "alpha" : "Jt") << ',' << fmt12(pt.alpha) << ','
           << fmt12(pt.jt) << '\n';
      }
    }
  }
  return kExitOk;
}

// ----------------------------------------------------------------- capacity

struct CapacityArgs {
  double jt_min = 1.0;
  double jt_max = 1.0;
  std::size_t steps = 1;
  double gm = 0.0;
  double resolution = 0.005;
  double alpha_max = 1.5;
  std::string criterion = "slaved-noise";
};

void add_capacity(CLI::App* sub, CapacityArgs& a) {
  sub->add_option("--jt-min", a.jt_min, "First Jt");
  sub->add_option("--jt-max", a.jt_max, "Last Jt");
  sub->add_option("--steps", a.steps, "Number of Jt values (endpoints included)");
  sub->add_option("--gm", a.gm, "External drive (g/J) M^z");
  sub->add_option("--resolution", a.resolution, "Alpha resolution of the bisection");
  sub->add_option("--alpha-max", a.alpha_max, "Largest alpha searched");
  sub->add_option("--criterion", a.criterion, "Stability criterion")->check(kCriteria);
}

int run_capacity(const CapacityArgs& a, const Shared& s, std::ostream& out) {
  require_range(a.jt_min, a.jt_max, a.steps, "Jt");
  require(a.jt_min > 0.0, "capacity needs Jt > 0");
  require(std::isfinite(a.gm), "--gm must be finite");
  require(a.resolution > 0.0, "--resolution must be positive");
  require(a.alpha_max > 0.0, "--alpha-max must be positive");
  Sink sink(s.out, out);

  mf::CapacityOptions copt;
  copt.resolution = a.resolution;
  copt.alpha_max = a.alpha_max;
  mf::FiniteSolverOptions solver;
  solver.criterion = parse_criterion(a.criterion);
  const auto jts = linspace(a.jt_min, a.jt_max, a.steps);
  const auto caps = collect<double>(jts.size(), s.jobs,
                                    [&](std::size_t k) { return mf::capacity_at(jts[k], a.gm, copt, solver); });

  auto& os = *sink;
  os << "Jt,gM,capacity\n";
  for (std::size_t k = 0; k < jts.size(); ++k)
    os << fmt12(jts[k]) << ',' << fmt12(a.gm) << ',' << fmt12(caps[k]) << '\n';
  return kExitOk;
}

// ------------------------------------------------------------------ driver

void parse_args(CLI::App& app, std::vector<std::string> args) {
  std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
  app.parse(std::move(args));
}

void print_resolved(const CLI::App* sub, std::ostream& err) {
  err << "# subcommand=" << sub->get_name() << '\n';
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_lnames().empty() || opt->get_lnames().front() == "help") continue;
    const auto& results = opt->results();
    err << "# " << opt->get_lnames().front() << '='
        << (results.empty() ? opt->get_default_str() : results.back()) << '\n';
  }
}

std::string find_config_path(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config" && k + 1 < args.size()) path = args[k + 1];
    if (args[k].rfind("--config=", 0) == 0) path = args[k].substr(9);
  }
  return path;
}

}  // namespace

std::vector<ConfigEntry> load_config_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  require(static_cast<bool>(f), "cannot read config file " + path.string());
  std::vector<ConfigEntry> entries;
  std::string raw;
  for (std::size_t lineno = 1; std::getline(f, raw); ++lineno) {
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto where = "config line " + std::to_string(lineno) + ": ";
    const auto eq = line.find('=');
    require(eq != std::string::npos, where + "expected key=value, got '" + line + "'");
    ConfigEntry e{trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1)), lineno};
    require(!e.key.empty(), where + "missing key");
    require(std::all_of(e.key.begin(), e.key.end(),
                        [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_'; }),
            where + "invalid key '" + e.key + "'");
    require(!e.value.empty(), where + "missing value for '" + e.key + "'");
    entries.push_back(std::move(e));
  }
  return entries;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum associative memory toolkit", "qam"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  struct Command {
    CLI::App* app;
    Shared shared;
  };
  ClassicalArgs classical_args;
  SimulateArgs simulate_args;
  MFSingleArgs mf_single_args;
  MFSolveArgs mf_solve_args;
  SweepArgs sweep_args;
  CapacityArgs capacity_args;
  std::map<std::string, Command> commands;
  auto add = [&](const std::string& name, const std::string& help) {
    auto* sub = app.add_subcommand(name, help);
    auto& cmd = commands[name];
    cmd.app = sub;
    add_shared(sub, cmd.shared);
    return sub;
  };
  add_classical(add("classical", "Classical Hopfield retrieval trace"), classical_args);
  add_simulate(add("simulate", "Exact state-vector evolution of the qubit network"), simulate_args);
  add_mf_single(add("mf-single", "Single-pattern mean-field fixed points over a Jt range"), mf_single_args);
  add_mf_solve(add("mf-solve", "Finite-density order-parameter fixed points"), mf_solve_args);
  add_sweep(add("sweep", "Phase diagram over the (alpha, Jt) plane"), sweep_args);
  add_capacity(add("capacity", "Storage capacity versus Jt"), capacity_args);

  try {
    std::vector<std::string> full = args;
    const std::string config_path = find_config_path(args);
    if (!config_path.empty() && !args.empty() && commands.count(args.front())) {
      CLI::App* sub = commands.at(args.front()).app;
      std::vector<std::string> from_file;
      for (const auto& e : load_config_file(config_path)) {
        const auto where = "config line " + std::to_string(e.line) + ": ";
        require(e.key != "config", where + "config files cannot include other config files");
        require(sub->get_option_no_throw("--" + e.key) != nullptr,
                where + "unknown key '" + e.key + "' for " + args.front());
        const std::string flag = "--" + e.key + "=" + e.value;
        try {
          parse_args(app, {args.front(), flag});
        } catch (const CLI::ParseError& pe) {
          throw ValidationError(where + pe.what());
        }
        from_file.push_back(flag);
      }
      full.insert(full.begin() + 1, from_file.begin(), from_file.end());
    }
    parse_args(app, full);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  const Shared& shared = commands.at(name).shared;
  print_resolved(commands.at(name).app, err);
  try {
    if (name == "classical") return run_classical(classical_args, shared, out);
    if (name == "simulate") return run_simulate(simulate_args, shared, out, err);
    if (name == "mf-single") return run_mf_single(mf_single_args, shared, out);
    if (name == "mf-solve") return run_mf_solve(mf_solve_args, shared, out, err);
    if (name == "sweep") return run_sweep_cmd(sweep_args, shared, out, err);
    return run_capacity(capacity_args, shared, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace qam::cli
