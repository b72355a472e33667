#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "qam/cli.hpp"
#include "qam/errors.hpp"

namespace fs = std::filesystem;
using qam::cli::run;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name, const std::string& content) {
  const auto path = fs::temp_directory_path() / ("qam_cli_" + name);
  std::ofstream(path) << content;
  return path;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

bool mentions(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("help and usage errors") {
  for (const char* sub : {"classical", "simulate", "mf-single", "mf-solve", "sweep", "capacity"}) {
    const auto r = invoke({sub, "--help"});
    CHECK(r.code == qam::cli::kExitOk);
    CHECK(mentions(r.out + r.err, "--out"));
  }
  CHECK(invoke({"--help"}).code == qam::cli::kExitOk);
  CHECK(invoke({}).code == qam::cli::kExitValidation);
  CHECK(invoke({"teleport"}).code == qam::cli::kExitValidation);
  CHECK(invoke({"mf-solve", "--alpha", "abc"}).code == qam::cli::kExitValidation);
  CHECK(invoke({"mf-solve", "--bogus", "1"}).code == qam::cli::kExitValidation);
  CHECK(invoke({"mf-solve", "--alpha", "-0.1"}).code == qam::cli::kExitValidation);
  CHECK(invoke({"sweep", "--format", "png"}).code == qam::cli::kExitValidation);
  CHECK(invoke({"capacity", "--jt-min", "0", "--jt-max", "0"}).code == qam::cli::kExitValidation);
}

TEST_CASE("mf-single reports the transition near Jt = 1/2") {
  const auto r = invoke({"mf-single", "--jt-min", "0.3", "--jt-max", "0.7", "--steps", "400"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows[0] == std::vector<std::string>{"Jt", "gM", "branch_id", "m_y", "m_z", "stable"});
  double onset = -1.0, last_zero = -1.0;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    REQUIRE(rows[k].size() == 6);
    if (rows[k][5] != "stable") continue;
    const double jt = std::stod(rows[k][0]);
    if (std::abs(std::stod(rows[k][4])) > 1e-6) {
      if (onset < 0) onset = jt;
    } else {
      last_zero = jt;
    }
  }
  CHECK(onset > 0.5);
  CHECK(onset - 0.5 < 0.4 / 399 + 1e-12);
  CHECK(last_zero < onset);
  CHECK(mentions(r.err, "# steps=400"));
  CHECK(mentions(r.err, "# seed=0"));
}

TEST_CASE("simulate trace stays aligned with the stored pattern") {
  const auto r = invoke({"simulate", "--n", "10", "--p", "1", "--seed", "1", "--g-over-j", "0.1", "--jt-max",
                         "1.2", "--steps", "48"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 49);
  CHECK(rows[0] == std::vector<std::string>{"t", "Jt", "m_y", "m_z", "norm", "energy"});
  for (std::size_t k = 1; k < rows.size(); ++k) {
    CHECK(std::stod(rows[k][3]) >= -1e-12);
    CHECK(std::abs(std::stod(rows[k][4]) - 1.0) < 1e-10);
  }
  CHECK(std::stod(rows.back()[1]) == doctest::Approx(1.2));
  CHECK(invoke({"simulate", "--n", "15"}).code == qam::cli::kExitValidation);
}

TEST_CASE("identical seeds give identical output") {
  const std::vector<std::string> args{"classical", "--n", "60", "--p", "3", "--flips", "6", "--seed", "9"};
  const auto a = invoke(args), b = invoke(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto rows = parse_csv(a.out);
  CHECK(rows[0] == std::vector<std::string>{"sweep", "overlap_mu_1", "overlap_mu_2", "overlap_mu_3"});
  CHECK(std::stod(rows.back()[1]) == doctest::Approx(1.0));

  const auto s1 = invoke({"sweep", "--alpha-steps", "3", "--jt-steps", "3", "--jobs", "1"});
  const auto s2 = invoke({"sweep", "--alpha-steps", "3", "--jt-steps", "3", "--jobs", "2"});
  REQUIRE(s1.code == 0);
  CHECK(s1.out == s2.out);
}

TEST_CASE("config files") {
  SUBCASE("command line overrides the file") {
    const auto cfg = scratch("override.cfg", "# comment\n\nalpha=0.1\njt = 2\n");
    const auto r = invoke({"mf-solve", "--config", cfg.string(), "--alpha", "0.2"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    CHECK(std::stod(rows[1][0]) == 0.2);
    CHECK(std::stod(rows[1][1]) == 2.0);
    CHECK(mentions(r.err, "# alpha=0.2"));
    fs::remove(cfg);
  }
  SUBCASE("malformed value names its line") {
    const auto cfg = scratch("bad.cfg", "jt=1\nalpha=abc\n");
    const auto r = invoke({"mf-solve", "--config", cfg.string()});
    CHECK(r.code == qam::cli::kExitValidation);
    CHECK(mentions(r.err, "line 2"));
    CHECK_THROWS_AS(qam::cli::load_config_file(scratch("nokey.cfg", "=3\n")), qam::ValidationError);
    CHECK_THROWS_AS(qam::cli::load_config_file(scratch("noeq.cfg", "alpha\n")), qam::ValidationError);
    fs::remove(cfg);
  }
  SUBCASE("unknown key") {
    const auto cfg = scratch("unknown.cfg", "alpha=0.1\nbeta=2\n");
    const auto r = invoke({"mf-solve", "--config", cfg.string()});
    CHECK(r.code == qam::cli::kExitValidation);
    CHECK(mentions(r.err, "beta"));
    fs::remove(cfg);
  }
  SUBCASE("empty file keeps every default") {
    const auto cfg = scratch("empty.cfg", "");
    const auto with = invoke({"mf-solve", "--config", cfg.string()});
    const auto without = invoke({"mf-solve"});
    REQUIRE(with.code == 0);
    CHECK(with.out == without.out);
    const auto entries = qam::cli::load_config_file(cfg);
    CHECK(entries.empty());
    fs::remove(cfg);
  }
  SUBCASE("entries keep their line numbers") {
    const auto cfg = scratch("lines.cfg", "# a\nn = 12\n\nseed=4\n");
    const auto entries = qam::cli::load_config_file(cfg);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].key == "n");
    CHECK(entries[0].value == "12");
    CHECK(entries[0].line == 2);
    CHECK(entries[1].line == 4);
    fs::remove(cfg);
  }
  CHECK(invoke({"mf-solve", "--config", "/nonexistent/qam.cfg"}).code == qam::cli::kExitValidation);
}

TEST_CASE("output files") {
  const auto dir = fs::temp_directory_path();
  const auto csv = dir / "qam_cli_out.csv";
  const auto svg = dir / "qam_cli_plot.svg";
  const auto r = invoke({"sweep", "--alpha-steps", "2", "--jt-steps", "2", "--out", csv.string(), "--plot",
                         svg.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  CHECK(fs::file_size(csv) > 0);
  CHECK(fs::file_size(svg) > 0);
  fs::remove(csv);
  fs::remove(svg);

  const auto bad = invoke({"mf-solve", "--out", (dir / "no-such-dir" / "x.csv").string()});
  CHECK(bad.code != 0);
  CHECK(mentions(bad.err, "no-such-dir"));
}

TEST_CASE("installed binary") {
  const char* binary = std::getenv("QAM_BINARY");
  if (!binary) return;
  const auto out = fs::temp_directory_path() / "qam_cli_binary.txt";
  auto status = [&](const std::string& args) {
    const std::string cmd = std::string(binary) + " " + args + " > " + out.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("sweep --help") == 0);
  CHECK(status("mf-solve --alpha abc") == 2);
  CHECK(status("capacity --jt-min 1 --jt-max 1 --steps 1") == 0);
  std::ifstream in(out);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(mentions(text.str(), "Jt,gM,capacity"));
  fs::remove(out);
}
