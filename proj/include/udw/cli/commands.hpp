#pragma once

// The point / sweep / threshold / preset commands: computation, CSV
// tables and side-car manifests.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "udw/cli/config.hpp"
#include "udw/cli/presets.hpp"

namespace udw::cli {

inline constexpr const char* kArtifactVersion = "udw_harvest 1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFlagged = 2;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const char* const kSweepColumns =
    "swept_value,p,re_x,im_x,abs_x,concurrence,err_p,err_x,converged";
inline const char* const kCorrelatorColumns = "swept_value,re_c,im_c,abs_c,err_c,converged";
inline const char* const kThresholdColumns =
    "swept_value,threshold,bracket_lo,bracket_hi,tolerance_achieved,iterations,status,"
    "multi_crossing,converged";

/// Path of the manifest that accompanies an output file.
inline std::filesystem::path manifest_path(const std::filesystem::path& output) {
  return output.string() + ".manifest";
}

/// Path of the C table written next to a sweep table when C is requested.
inline std::filesystem::path correlator_path(const std::filesystem::path& output) {
  auto p = output;
  p.replace_extension();
  return p.string() + "_c.csv";
}

// ---------------------------------------------------------------------------
// Tables

namespace detail {

inline std::string cell(double v) { return format_double(v); }

inline std::string sweep_row(const harvest::SweepRow& row, const Quantities& q) {
  const auto& r = row.result;
  std::ostringstream out;
  out << cell(row.swept_value) << ',';
  const bool failed = !row.error.empty();
  auto put = [&](bool have, double v) {
    if (failed) {
      out << "nan";
    } else if (have) {
      out << cell(v);
    }
    out << ',';
  };
  put(q.need_p(), r.p_a);
  put(q.need_x(), r.x.real());
  put(q.need_x(), r.x.imag());
  put(q.need_x(), std::abs(r.x));
  put(q.concurrence, q.concurrence && !failed ? r.concurrence() : 0.0);
  put(q.need_p(), r.err_p);
  put(q.need_x(), r.err_x);
  out << (row.converged ? 1 : 0);
  return out.str();
}

}  // namespace detail

inline std::string sweep_csv(const harvest::SweepTable& table, const Quantities& q) {
  std::string out = std::string(kSweepColumns) + "\n";
  for (const auto& row : table.rows) out += detail::sweep_row(row, q) + "\n";
  return out;
}

inline std::string correlator_csv(const harvest::SweepTable& table) {
  std::string out = std::string(kCorrelatorColumns) + "\n";
  for (const auto& row : table.rows) {
    const auto c = row.result.c_corr;
    out += detail::cell(row.swept_value) + ",";
    if (c) {
      out += detail::cell(c->real()) + "," + detail::cell(c->imag()) + "," +
             detail::cell(std::abs(*c)) + "," + detail::cell(row.result.err_c) + ",";
    } else {
      out += "nan,nan,nan,nan,";
    }
    out += row.converged ? "1\n" : "0\n";
  }
  return out;
}

struct ThresholdRow {
  double swept_value = 0.0;
  harvest::ThresholdResult result;
  std::string error;
  bool flagged() const {
    return !error.empty() || !result.converged || result.multi_crossing ||
           result.status != harvest::ThresholdStatus::Found;
  }
};

inline std::string threshold_csv(const std::vector<ThresholdRow>& rows) {
  std::string out = std::string(kThresholdColumns) + "\n";
  for (const auto& row : rows) {
    const auto& r = row.result;
    out += detail::cell(row.swept_value) + ",";
    if (!row.error.empty()) {
      out += "nan,nan,nan,nan,0,error,0,0\n";
      continue;
    }
    out += detail::cell(r.value) + "," + detail::cell(r.lo) + "," + detail::cell(r.hi) + "," +
           detail::cell(r.tolerance_achieved) + "," + std::to_string(r.iterations) + "," +
           harvest::to_string(r.status) + "," + (r.multi_crossing ? "1" : "0") + "," +
           (r.converged ? "1" : "0") + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Manifest

struct ManifestInfo {
  std::string command;
  std::string output;
  std::vector<std::string> companions;
  double wall_time = 0.0;
  std::vector<bool> row_converged;
  std::vector<std::pair<std::size_t, std::string>> row_errors;
  std::string note;
};

/// The resolved configuration followed by a [manifest] section. The
/// configuration parser skips [manifest], so the file can be fed back to
/// the same subcommand.
inline std::string manifest_text(const RunConfig& cfg, const ManifestInfo& info) {
  std::ostringstream out;
  out << emit_config(cfg) << "\n[manifest]\n"
      << "artifact_version = " << kArtifactVersion << "\n"
      << "command = " << info.command << "\n"
      << "output = " << info.output << "\n";
  for (std::size_t i = 0; i < info.companions.size(); ++i) {
    out << "companion_" << i << " = " << info.companions[i] << "\n";
  }
  out << "wall_time_s = " << format_double(info.wall_time) << "\n"
      << "rows = " << info.row_converged.size() << "\n";
  std::string flags, flagged;
  for (std::size_t i = 0; i < info.row_converged.size(); ++i) {
    flags += (i ? "," : "") + std::string(info.row_converged[i] ? "1" : "0");
    if (!info.row_converged[i]) flagged += (flagged.empty() ? "" : ",") + std::to_string(i);
  }
  out << "row_converged = " << flags << "\n"
      << "flagged_rows = " << (flagged.empty() ? "none" : flagged) << "\n";
  for (const auto& [row, message] : info.row_errors) {
    std::string m = message;
    for (char& c : m) {
      if (c == '\n' || c == '\r') c = ' ';
    }
    out << "row_error_" << row << " = " << m << "\n";
  }
  if (!info.note.empty()) out << "note = " << info.note << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Files

/// An output file opened (and truncated) before any computation, so an
/// unwritable path fails fast.
class OutputFile {
 public:
  explicit OutputFile(std::filesystem::path path) : path_(std::move(path)) {
    stream_.open(path_, std::ios::binary | std::ios::trunc);
    if (!stream_) throw IoError("cannot open '" + path_.string() + "' for writing");
  }
  void write(const std::string& text) {
    stream_ << text;
    stream_.flush();
    if (!stream_) throw IoError("write to '" + path_.string() + "' failed");
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream stream_;
};

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path.string() + "'");
  return parse_config(in);
}

// ---------------------------------------------------------------------------
// Commands

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

/// Prints the single-point result as `key = value` lines.
inline int cmd_point(const RunConfig& cfg, std::ostream& out, bool with_c = false) {
  cfg.scenario.validate();
  const auto r = harvest::evaluate(cfg.scenario, cfg.tolerances, true, true, with_c);
  out << "scenario = " << detector::to_string(cfg.scenario.scenario) << "\n"
      << "p_a = " << format_double(r.p_a) << "\n"
      << "p_b = " << format_double(r.p_b) << "\n"
      << "re_x = " << format_double(r.x.real()) << "\n"
      << "im_x = " << format_double(r.x.imag()) << "\n"
      << "abs_x = " << format_double(std::abs(r.x)) << "\n"
      << "concurrence = " << format_double(r.concurrence()) << "\n"
      << "err_p = " << format_double(r.err_p) << "\n"
      << "err_x = " << format_double(r.err_x) << "\n";
  if (r.c_corr) {
    out << "re_c = " << format_double(r.c_corr->real()) << "\n"
        << "im_c = " << format_double(r.c_corr->imag()) << "\n"
        << "err_c = " << format_double(r.err_c) << "\n";
  }
  out << "converged = " << (r.converged ? 1 : 0) << "\n";
  return r.converged ? kExitOk : kExitFlagged;
}

inline int cmd_sweep(const RunConfig& cfg, const std::filesystem::path& output, int threads) {
  if (!cfg.sweep) throw ConfigError("sweep: the config has no [sweep] section");
  if (cfg.threshold) throw ConfigError("sweep: the config has a [threshold] section; use threshold");
  cfg.validate();
  const auto& sw = *cfg.sweep;
  OutputFile csv(output);
  OutputFile manifest(manifest_path(output));
  std::optional<OutputFile> c_csv;
  if (sw.quantities.c) c_csv.emplace(correlator_path(output));

  const auto t0 = std::chrono::steady_clock::now();
  harvest::SweepSpec spec{cfg.scenario, sw.parameter, sw.grid, sw.quantities};
  const auto table = harvest::run_sweep(spec, cfg.tolerances, threads);

  ManifestInfo info;
  info.command = "sweep";
  info.output = output.filename().string();
  csv.write(sweep_csv(table, sw.quantities));
  if (c_csv) {
    c_csv->write(correlator_csv(table));
    info.companions.push_back(c_csv->path().filename().string());
  }
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    info.row_converged.push_back(table.rows[i].converged);
    if (!table.rows[i].error.empty()) info.row_errors.emplace_back(i, table.rows[i].error);
  }
  info.wall_time = detail::seconds_since(t0);
  manifest.write(manifest_text(cfg, info));
  return table.all_converged() ? kExitOk : kExitFlagged;
}

/// Threshold search at each point of the [sweep] grid.
inline std::vector<ThresholdRow> run_thresholds(const RunConfig& cfg, int threads) {
  if (!cfg.sweep || !cfg.threshold) {
    throw ConfigError("threshold: the config needs [sweep] and [threshold] sections");
  }
  const auto& sw = *cfg.sweep;
  const auto& th = *cfg.threshold;
  harvest::ThresholdOptions opt;
  opt.tol = th.tol;
  opt.scan_points = th.scan_points;
  std::vector<ThresholdRow> rows(sw.grid.size());
  harvest::parallel_for(rows.size(), threads, [&](std::size_t i) {
    rows[i].swept_value = sw.grid[i];
    try {
      ScenarioConfig c = harvest::with_value(cfg.scenario, sw.parameter, sw.grid[i]);
      rows[i].result = th.target == ThresholdTarget::DeltaDMax
                           ? harvest::find_ddmax(c, th.lo, th.hi, cfg.tolerances, opt)
                           : harvest::find_amax(c, th.lo, th.hi, cfg.tolerances, opt);
    } catch (const std::exception& e) {
      rows[i].error = e.what();
    }
  });
  return rows;
}

inline int cmd_threshold(const RunConfig& cfg, const std::filesystem::path& output, int threads) {
  if (!cfg.sweep || !cfg.threshold) {
    throw ConfigError("threshold: the config needs [sweep] and [threshold] sections");
  }
  cfg.validate();
  OutputFile csv(output);
  OutputFile manifest(manifest_path(output));
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = run_thresholds(cfg, threads);

  ManifestInfo info;
  info.command = "threshold";
  info.output = output.filename().string();
  bool clean = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    info.row_converged.push_back(!rows[i].flagged());
    clean = clean && !rows[i].flagged();
    if (!rows[i].error.empty()) {
      info.row_errors.emplace_back(i, rows[i].error);
    } else if (!rows[i].result.message.empty()) {
      info.row_errors.emplace_back(i, rows[i].result.message);
    }
  }
  csv.write(threshold_csv(rows));
  info.wall_time = detail::seconds_since(t0);
  manifest.write(manifest_text(cfg, info));
  return clean ? kExitOk : kExitFlagged;
}

/// Runs every curve of a preset into `directory` as <curve>.csv plus
/// manifest. Returns the worst exit code over the curves.
inline int cmd_preset(const std::string& name, const std::filesystem::path& directory,
                      int threads, std::optional<double> rel_tol, std::ostream& log) {
  const auto preset = find_preset(name);
  if (!preset) throw ConfigError("preset: unknown preset '" + name + "'");
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError("cannot create '" + directory.string() + "': " + ec.message());
  int worst = kExitOk;
  for (const auto& curve : preset->curves) {
    RunConfig cfg = curve.config;
    if (rel_tol) override_rel_tol(cfg, *rel_tol);
    const auto path = directory / (curve.name + ".csv");
    const int code = cfg.threshold ? cmd_threshold(cfg, path, threads)
                                   : cmd_sweep(cfg, path, threads);
    log << path.string() << (code == kExitOk ? "" : " (flagged rows)") << "\n";
    worst = std::max(worst, code);
  }
  return worst;
}

}  // namespace udw::cli
