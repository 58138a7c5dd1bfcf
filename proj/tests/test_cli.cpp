#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "udw/cli/commands.hpp"

using namespace udw;
using namespace udw::cli;
namespace fs = std::filesystem;

namespace {

const char* const kPointConfig = R"(
[scenario]
kind = inertial
dd_over_sigma = 1
dz_over_sigma = 0.5

[detector]
omega_sigma = 0.1
)";

const char* const kSweepConfig = R"(
[scenario]
kind = parallel
a_sigma = 0.5
dd_over_sigma = 1
dz_over_sigma = 1

[detector]
omega_sigma = 0.1

[quadrature]
rel_tol_p = 1e-9
epsilon_schedule = 0.01, 0.005, 0.0025, 0.00125

[sweep]
parameter = dz
grid = linspace(0.4, 2.2, 4)
quantities = p, x, concurrence
)";

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("udw_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }
  const fs::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run_tool(const std::string& args, const TempDir& dir) {
  const auto out = dir / "stdout.txt";
  const auto err = dir / "stderr.txt";
  const std::string cmd = std::string(UDW_HARVEST_BIN) + " " + args + " > " + out.string() +
                          " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_text(out);
  r.err = read_text(err);
  return r;
}

std::map<std::string, std::string> key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return kv;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

// Column `name` of a CSV table as numbers.
std::vector<double> column(const std::string& text, const std::string& name) {
  const auto rows = csv_rows(text);
  const auto& header = rows.at(0);
  const auto it = std::find(header.begin(), header.end(), name);
  EXPECT_NE(it, header.end()) << name;
  const auto idx = static_cast<std::size_t>(it - header.begin());
  std::vector<double> v;
  for (std::size_t i = 1; i < rows.size(); ++i) v.push_back(std::stod(rows[i].at(idx)));
  return v;
}

std::string error_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

TEST(Config, ParsesAllSections) {
  const auto cfg = parse_config_text(kSweepConfig);
  EXPECT_EQ(cfg.scenario.scenario, Scenario::Parallel);
  EXPECT_EQ(cfg.scenario.a, 0.5);
  EXPECT_EQ(cfg.scenario.omega, 0.1);
  EXPECT_EQ(cfg.tolerances.p.rel_tol, 1e-9);
  EXPECT_EQ(cfg.tolerances.x.rel_tol, 1e-6);
  ASSERT_TRUE(cfg.sweep);
  EXPECT_EQ(cfg.sweep->parameter, SweepParameter::DeltaZ);
  EXPECT_EQ(cfg.sweep->grid, (std::vector<double>{0.4, 1.0, 1.6, 2.2}));
  EXPECT_TRUE(cfg.sweep->quantities.p);
  EXPECT_FALSE(cfg.sweep->quantities.c);
  EXPECT_FALSE(cfg.threshold);
}

TEST(Config, RoundTripThroughEmit) {
  const auto cfg = parse_config_text(kSweepConfig);
  EXPECT_EQ(parse_config_text(emit_config(cfg)), cfg);
  const auto point = parse_config_text(kPointConfig);
  EXPECT_EQ(parse_config_text(emit_config(point)), point);
  for (const auto& name : preset_names()) {
    const auto preset = find_preset(name);
    for (const auto& curve : preset->curves) {
      EXPECT_EQ(parse_config_text(emit_config(curve.config)), curve.config) << curve.name;
    }
  }
}

TEST(Config, ManifestSectionIsSkipped) {
  const auto cfg = parse_config_text(kSweepConfig);
  ManifestInfo info;
  info.command = "sweep";
  info.output = "out.csv";
  info.row_converged = {true, false};
  info.row_errors = {{1, "multi\nline"}};
  const std::string text = manifest_text(cfg, info);
  EXPECT_NE(text.find("artifact_version = udw_harvest 1.0"), std::string::npos);
  EXPECT_NE(text.find("flagged_rows = 1"), std::string::npos);
  EXPECT_NE(text.find("row_error_1 = multi line"), std::string::npos);
  EXPECT_EQ(parse_config_text(text), cfg);
}

TEST(Config, FieldLevelErrors) {
  const std::string base = "[scenario]\nkind = inertial\ndd_over_sigma = 1\ndz_over_sigma = 1\n"
                           "[detector]\nomega_sigma = 0.1\n";
  EXPECT_EQ(error_of(base), "");
  EXPECT_EQ(error_of(base + "[sweep]\nparameter = dz\ngrid = 1\nstep = 2\n"),
            "sweep.step: unknown key");
  EXPECT_EQ(error_of(base + "[plot]\nx = 1\n"), "[plot]: unknown section");
  EXPECT_EQ(error_of("seed = 3\n" + base), "seed: key outside any section");
  EXPECT_EQ(error_of("[scenario]\nkind = inertial\ndd_over_sigma = 1\ndz_over_sigma = 1\n"),
            "detector.omega_sigma: required key is missing");
  EXPECT_EQ(error_of("[scenario]\nkind = inertial\ndd_over_sigma = one\ndz_over_sigma = 1\n"
                     "[detector]\nomega_sigma = 0.1\n"),
            "scenario.dd_over_sigma: expected a number, got 'one'");
  EXPECT_NE(error_of("[scenario]\nkind = sideways\ndd_over_sigma = 1\ndz_over_sigma = 1\n"
                     "[detector]\nomega_sigma = 0.1\n")
                .find("scenario.kind"),
            std::string::npos);
  EXPECT_NE(error_of(base + "[quadrature]\nmax_subdivisions = 2.5\n").find("max_subdivisions"),
            std::string::npos);
  EXPECT_NE(error_of(base + "[sweep]\nparameter = dz\ngrid = 1\nquantities = p, q\n")
                .find("sweep.quantities: unknown quantity 'q'"),
            std::string::npos);
  EXPECT_NE(error_of(base + "[threshold]\ntarget = dd_min\n").find("threshold.target"),
            std::string::npos);
  EXPECT_NE(error_of(base + "[sweep]\nparameter = dz\ngrid = 2, 1\n").find("increasing"),
            std::string::npos);
}

TEST(Config, ScenarioInvariantsSurface) {
  const std::string detector = "[detector]\nomega_sigma = 0.1\n";
  EXPECT_EQ(error_of("[scenario]\nkind = parallel\na_sigma = 0\ndd_over_sigma = 1\n"
                     "dz_over_sigma = 1\n" + detector),
            "scenario = Inertial required when a = 0");
  EXPECT_THROW(parse_config_text("[scenario]\nkind = inertial\ndd_over_sigma = 1\n"
                                 "dz_over_sigma = 0.005\n" + detector),
               OnBoundaryError);
}

TEST(Config, LinspaceAndLists) {
  EXPECT_EQ(detail::parse_grid("g", "linspace(0, 1, 5)"),
            (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
  EXPECT_EQ(detail::parse_grid("g", "linspace(2, 2, 1)"), (std::vector<double>{2.0}));
  EXPECT_EQ(detail::parse_grid("g", " 0.5, 1 ,2 "), (std::vector<double>{0.5, 1.0, 2.0}));
  EXPECT_THROW(detail::parse_grid("g", "linspace(0, 1)"), ConfigError);
  EXPECT_THROW(detail::parse_grid("g", "linspace(0, 1, 0)"), ConfigError);
  EXPECT_THROW(detail::parse_grid("g", "linspace(0, 1, 3"), ConfigError);
  EXPECT_THROW(detail::parse_grid("g", "1, , 2"), ConfigError);
}

TEST(Config, TolOverrideSetsBothIntegralTolerances) {
  auto cfg = parse_config_text(kSweepConfig);
  override_rel_tol(cfg, 1e-5);
  EXPECT_EQ(cfg.tolerances.p.rel_tol, 1e-5);
  EXPECT_EQ(cfg.tolerances.x.rel_tol, 1e-5);
}

// ---------------------------------------------------------------------------
// Tables

TEST(Tables, FullPrecisionFormatting) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
  EXPECT_EQ(format_double(2.0), "2");
}

TEST(Tables, FixedColumnSets) {
  EXPECT_STREQ(kSweepColumns, "swept_value,p,re_x,im_x,abs_x,concurrence,err_p,err_x,converged");
  EXPECT_STREQ(kCorrelatorColumns, "swept_value,re_c,im_c,abs_c,err_c,converged");
  EXPECT_STREQ(kThresholdColumns,
               "swept_value,threshold,bracket_lo,bracket_hi,tolerance_achieved,iterations,status,"
               "multi_crossing,converged");
}

TEST(Tables, UnrequestedQuantitiesAreEmptyCells) {
  harvest::SweepTable table;
  harvest::SweepRow row;
  row.swept_value = 0.5;
  row.result.p_a = row.result.p_b = 0.01;
  row.result.x = {0.02, -0.01};
  table.rows.push_back(row);
  harvest::SweepRow failed;
  failed.swept_value = 0.7;
  failed.converged = false;
  failed.error = "boom";
  table.rows.push_back(failed);

  const auto rows = csv_rows(sweep_csv(table, {true, false, false, false}));
  ASSERT_EQ(rows.size(), 3u);
  ASSERT_EQ(rows[1].size(), 9u);
  EXPECT_EQ(rows[1][1], "0.01");
  EXPECT_EQ(rows[1][2], "");
  EXPECT_EQ(rows[1][5], "");
  EXPECT_EQ(rows[1][8], "1");
  EXPECT_EQ(rows[2][1], "nan");
  EXPECT_EQ(rows[2][8], "0");
}

TEST(Tables, CompanionPaths) {
  EXPECT_EQ(manifest_path("out/run.csv"), fs::path("out/run.csv.manifest"));
  EXPECT_EQ(correlator_path("out/run.csv"), fs::path("out/run_c.csv"));
}

// ---------------------------------------------------------------------------
// The binary

TEST(Binary, PointPrintsLabeledConsistentNumbers) {
  TempDir dir;
  write(dir / "p.ini", kPointConfig);
  const auto r = run_tool("point " + (dir / "p.ini").string(), dir);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto kv = key_values(r.out);
  for (const char* k : {"p_a", "p_b", "re_x", "im_x", "abs_x", "concurrence", "err_p", "err_x"}) {
    ASSERT_TRUE(kv.count(k)) << k;
  }
  const double p_a = std::stod(kv.at("p_a")), p_b = std::stod(kv.at("p_b"));
  const Complex x(std::stod(kv.at("re_x")), std::stod(kv.at("im_x")));
  EXPECT_EQ(std::stod(kv.at("abs_x")), std::abs(x));
  EXPECT_NEAR(std::stod(kv.at("concurrence")),
              2.0 * std::max(0.0, std::abs(x) - std::sqrt(p_a * p_b)), 1e-16);
  EXPECT_EQ(p_a, detector::pd_inertial(0.1, 0.5));

  const auto again = run_tool("point " + (dir / "p.ini").string(), dir);
  EXPECT_EQ(again.out, r.out);
}

TEST(Binary, PointWithCorrelator) {
  TempDir dir;
  write(dir / "p.ini", kPointConfig);
  const auto r = run_tool("point --with-c " + (dir / "p.ini").string(), dir);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto kv = key_values(r.out);
  ASSERT_TRUE(kv.count("re_c"));
  EXPECT_GT(std::stod(kv.at("re_c")), 0.0);
}

TEST(Binary, ConfigErrorsExitOne) {
  TempDir dir;
  write(dir / "a0.ini",
        "[scenario]\nkind = parallel\na_sigma = 0\ndd_over_sigma = 1\ndz_over_sigma = 0.5\n"
        "[detector]\nomega_sigma = 0.1\n");
  auto r = run_tool("point " + (dir / "a0.ini").string(), dir);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("scenario = Inertial required when a = 0"), std::string::npos) << r.err;

  write(dir / "plate.ini",
        "[scenario]\nkind = inertial\ndd_over_sigma = 1\ndz_over_sigma = 0.005\n"
        "[detector]\nomega_sigma = 0.1\n");
  r = run_tool("point " + (dir / "plate.ini").string(), dir);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("dz_over_sigma must be >= 1/100"), std::string::npos) << r.err;

  write(dir / "typo.ini",
        "[scenario]\nkind = inertial\ndd_over_sigma = 1\ndz_over_sigma = 0.5\n"
        "[detector]\nomega = 0.1\n");
  r = run_tool("point " + (dir / "typo.ini").string(), dir);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("detector.omega"), std::string::npos) << r.err;

  r = run_tool("point " + (dir / "missing.ini").string(), dir);
  EXPECT_EQ(r.code, 1);
  r = run_tool("sweep " + (dir / "a0.ini").string(), dir);  // no -o
  EXPECT_EQ(r.code, 1);
  r = run_tool("preset fig99", dir);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("unknown preset"), std::string::npos);
}

TEST(Binary, UnwritableOutputFailsBeforeComputing) {
  TempDir dir;
  write(dir / "s.ini", kSweepConfig);
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_tool("sweep " + (dir / "s.ini").string() + " -o " +
                              (dir / "no_such_dir" / "out.csv").string(),
                          dir);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("io error"), std::string::npos) << r.err;
  EXPECT_LT(secs, 1.0);
}

TEST(Binary, FlaggedRowsExitTwo) {
  TempDir dir;
  write(dir / "tight.ini",
        "[scenario]\nkind = parallel\na_sigma = 0.5\ndd_over_sigma = 1\ndz_over_sigma = 1\n"
        "[detector]\nomega_sigma = 0.1\n"
        "[quadrature]\nrel_tol_x = 1e-14\nmax_subdivisions = 4\n");
  const auto point = run_tool("point " + (dir / "tight.ini").string(), dir);
  EXPECT_EQ(point.code, 2) << point.err;
  EXPECT_EQ(key_values(point.out).at("converged"), "0");

  write(dir / "tight_sweep.ini",
        "[scenario]\nkind = parallel\na_sigma = 0.5\ndd_over_sigma = 1\ndz_over_sigma = 1\n"
        "[detector]\nomega_sigma = 0.1\n"
        "[quadrature]\nrel_tol_x = 1e-14\nmax_subdivisions = 4\n"
        "[sweep]\nparameter = dz\ngrid = 0.5, 1\nquantities = x\n");
  const auto out = dir / "t.csv";
  const auto sweep = run_tool("sweep " + (dir / "tight_sweep.ini").string() + " -o " +
                                  out.string(), dir);
  EXPECT_EQ(sweep.code, 2) << sweep.err;
  EXPECT_NE(read_text(manifest_path(out)).find("flagged_rows = 0,1"), std::string::npos);
}

TEST(Binary, SweepReplaysBitwiseFromManifest) {
  TempDir dir;
  write(dir / "s.ini", kSweepConfig);
  const auto first = dir / "first.csv";
  const auto second = dir / "second.csv";
  auto r = run_tool("--threads 1 --tol 2e-7 sweep " + (dir / "s.ini").string() + " -o " +
                        first.string(), dir);
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_TRUE(fs::exists(manifest_path(first)));

  // the manifest carries the overridden tolerance, so no --tol on replay
  r = run_tool("--threads 3 sweep " + manifest_path(first).string() + " -o " + second.string(),
               dir);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_text(first), read_text(second));
  const auto replayed = load_config(manifest_path(second));
  EXPECT_EQ(replayed.tolerances.p.rel_tol, 2e-7);
  EXPECT_EQ(replayed, load_config(manifest_path(first)));

  const auto rows = csv_rows(read_text(first));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0].size(), 9u);
  EXPECT_EQ(rows[1][0], "0.40000000000000002");
}

TEST(Binary, CorrelatorCompanionFile) {
  TempDir dir;
  std::string text = kSweepConfig;
  text.replace(text.find("quantities = p, x, concurrence"), 30, "quantities = c");
  write(dir / "c.ini", text);
  const auto out = dir / "c.csv";
  const auto r = run_tool("sweep " + (dir / "c.ini").string() + " -o " + out.string(), dir);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto c = read_text(correlator_path(out));
  EXPECT_EQ(c.substr(0, c.find('\n')), kCorrelatorColumns);
  EXPECT_EQ(column(c, "re_c").size(), 4u);
  EXPECT_NE(read_text(manifest_path(out)).find("companion_0 = c_c.csv"), std::string::npos);
}

TEST(Binary, ThresholdTable) {
  TempDir dir;
  write(dir / "t.ini",
        "[scenario]\nkind = inertial\ndd_over_sigma = 1\ndz_over_sigma = 1\n"
        "[detector]\nomega_sigma = 0.1\n"
        "[sweep]\nparameter = dz\ngrid = 0.5, 1, 2\n"
        "[threshold]\ntarget = dd_max\nlo = 0.1\nhi = 6\n");
  const auto out = dir / "t.csv";
  const auto r = run_tool("threshold " + (dir / "t.ini").string() + " -o " + out.string(), dir);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto text = read_text(out);
  EXPECT_EQ(text.substr(0, text.find('\n')), kThresholdColumns);
  const auto v = column(text, "threshold");
  ASSERT_EQ(v.size(), 3u);
  EXPECT_GT(v[0], v[2]);
  EXPECT_TRUE(fs::exists(manifest_path(out)));
}

TEST(Binary, PresetListing) {
  TempDir dir;
  const auto r = run_tool("preset --list", dir);
  EXPECT_EQ(r.code, 0);
  for (const char* n : {"fig1a", "fig1b", "fig2a", "fig2b", "fig3", "fig4", "fig5", "fig6",
                        "fig7", "fig8", "fig9"}) {
    EXPECT_NE(r.out.find(std::string(n) + "\n"), std::string::npos) << n;
  }
}

TEST(Binary, PresetFlagWritesEveryCurveWithManifest) {
  TempDir dir;
  const auto r = run_tool("--preset fig3 --preset-dir " + (dir / "out").string(), dir);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "out" / "fig3.csv"));
  EXPECT_TRUE(fs::exists(dir / "out" / "fig3.csv.manifest"));
}

// ---------------------------------------------------------------------------
// Preset examples, run on coarser grids than the built-in ones

namespace {

// Runs a preset curve in-process with a replacement grid; returns the CSV.
std::string run_curve(const PresetCurve& curve, std::vector<double> grid, const TempDir& dir,
                      int threads = 1) {
  RunConfig cfg = curve.config;
  cfg.sweep->grid = std::move(grid);
  const auto out = dir / (curve.name + ".csv");
  const int code = cfg.threshold ? cmd_threshold(cfg, out, threads) : cmd_sweep(cfg, out, threads);
  EXPECT_EQ(code, kExitOk) << curve.name;
  EXPECT_TRUE(fs::exists(manifest_path(out)));
  return read_text(out);
}

const PresetCurve& curve(const Preset& p, const std::string& name) {
  for (const auto& c : p.curves) {
    if (c.name == name) return c;
  }
  throw std::runtime_error("no curve " + name);
}

}  // namespace

TEST(Presets, EveryNameResolves) {
  for (const auto& name : preset_names()) {
    const auto p = find_preset(name);
    ASSERT_TRUE(p) << name;
    EXPECT_FALSE(p->curves.empty()) << name;
    for (const auto& c : p->curves) EXPECT_NO_THROW(c.config.validate()) << c.name;
  }
  EXPECT_EQ(find_preset("fig2a")->curves.size(), 3u);
  EXPECT_EQ(find_preset("fig7")->curves.size(), 9u);
  EXPECT_FALSE(find_preset("fig11"));
}

TEST(Presets, Fig1aBoundarySuppressesThermalization) {
  TempDir dir;
  const auto preset = *find_preset("fig1a");
  ASSERT_EQ(preset.curves.size(), 3u);
  std::vector<double> p;
  for (const auto& c : preset.curves) p.push_back(column(run_curve(c, {1.0}, dir), "p").at(0));
  EXPECT_LT(p[0], p[1]);
  EXPECT_LT(p[1], p[2]);
}

TEST(Presets, Fig2aUniqueInteriorMaximum) {
  TempDir dir;
  const auto preset = *find_preset("fig2a");
  ASSERT_EQ(preset.curves.size(), 3u);
  std::vector<double> grid;
  for (int i = 0; i < 50; ++i) grid.push_back(0.02 + 0.1 * i);
  for (const auto& c : preset.curves) {
    const auto conc = column(run_curve(c, grid, dir), "concurrence");
    int maxima = 0;
    for (std::size_t i = 1; i + 1 < conc.size(); ++i) {
      if (conc[i] > conc[i - 1] && conc[i] > conc[i + 1]) ++maxima;
    }
    const auto top = std::max_element(conc.begin(), conc.end()) - conc.begin();
    EXPECT_EQ(maxima, 1) << c.name;
    EXPECT_GT(top, 0) << c.name;
    EXPECT_LT(top, static_cast<long>(conc.size()) - 1) << c.name;
  }
}

TEST(Presets, Fig7bCurvesCross) {
  TempDir dir;
  const auto preset = *find_preset("fig7b");
  const std::vector<double> grid{0.1, 0.7, 1.4, 2.0};
  const auto par = column(run_curve(curve(preset, "fig7b_parallel"), grid, dir), "concurrence");
  const auto anti =
      column(run_curve(curve(preset, "fig7b_antiparallel"), grid, dir), "concurrence");
  EXPECT_GT(par.front(), anti.front());
  EXPECT_LT(par.back(), anti.back());
}

TEST(Presets, Fig4DecreasesToFreeSpaceValue) {
  TempDir dir;
  const auto preset = *find_preset("fig4");
  const auto v = column(run_curve(curve(preset, "fig4"), {0.2, 0.5, 1, 2, 3, 5, 10}, dir),
                        "threshold");
  const double tol = curve(preset, "fig4").config.threshold->tol;
  for (std::size_t i = 1; i < v.size(); ++i) EXPECT_LE(v[i], v[i - 1] + tol) << i;
  const double free = column(run_curve(curve(preset, "fig4_free"), {1000.0}, dir), "threshold")[0];
  EXPECT_LE(std::abs(v.back() - free), 0.01 * free);
}

TEST(Presets, Fig8aAcceleratedBelowInertial) {
  TempDir dir;
  const auto preset = *find_preset("fig8a");
  const std::vector<double> grid{0.5, 1.5, 3.0};
  const auto inertial = column(run_curve(curve(preset, "fig8a_inertial"), grid, dir), "threshold");
  for (const char* s : {"parallel", "antiparallel", "perpendicular"}) {
    const auto v = column(run_curve(curve(preset, std::string("fig8a_") + s), grid, dir),
                          "threshold");
    for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_LT(v[i], inertial[i]) << s << " " << i;
  }
}

TEST(Presets, Fig9cAntiParallelToleratesMoreAcceleration) {
  TempDir dir;
  const auto preset = *find_preset("fig9c");
  const std::vector<double> grid{0.5, 1.5};
  const auto par = column(run_curve(curve(preset, "fig9c_parallel"), grid, dir), "threshold");
  const auto anti =
      column(run_curve(curve(preset, "fig9c_antiparallel"), grid, dir), "threshold");
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_GT(anti[i], par[i]) << grid[i];
}
