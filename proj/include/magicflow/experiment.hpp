#pragma once

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "magicflow/analytics.hpp"
#include "magicflow/defect.hpp"
#include "magicflow/ensemble.hpp"
#include "magicflow/replica_tn.hpp"

namespace magicflow {

using Json = nlohmann::ordered_json;

struct ExperimentConfig {
  std::string mode;
  int d = 2;
  std::vector<int> n_list = {4};
  int t_min = 1;
  int t_max = 1;
  int k = 4;
  int chi = 64;
  double cutoff = 1e-14;
  int ensemble = 100;
  uint64_t seed = 0;
  int threads = 1;
  int t_per_layer = 1;
  std::string out_path;
  std::string format = "csv";
  std::string in_path;
  std::string ycol = "delta_Y";
  double fit_tmin = 5.0;
  double fit_tmax = 1e300;
};

namespace experiment_detail {

inline void parse_t_range(const std::string& text, int& lo, int& hi) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      lo = hi = std::stoi(text);
    } else {
      lo = std::stoi(text.substr(0, colon));
      hi = std::stoi(text.substr(colon + 1));
    }
  } catch (const std::exception&) {
    throw CLI::ValidationError("--t", "expected an integer or lo:hi range");
  }
  if (lo < 0 || hi < lo) throw CLI::ValidationError("--t", "need 0 <= lo <= hi");
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Writer {
 public:
  explicit Writer(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw UsageError("cannot open output file: " + path);
    }
  }
  std::ostream& out() { return file_.is_open() ? file_ : std::cout; }
  void line(const std::string& s) { out() << s << "\n"; }

 private:
  std::ofstream file_;
};

inline std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc;
  gmtime_r(&tt, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

inline Json config_json(const ExperimentConfig& c) {
  Json j;
  j["mode"] = c.mode;
  j["d"] = c.d;
  j["N"] = c.n_list;
  j["t"] = {c.t_min, c.t_max};
  j["k"] = c.k;
  j["chi"] = c.chi;
  j["cutoff"] = c.cutoff;
  j["M"] = c.ensemble;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["t_per_layer"] = c.t_per_layer;
  j["format"] = c.format;
  if (!c.in_path.empty()) {
    j["in"] = c.in_path;
    j["ycol"] = c.ycol;
    j["fit_tmin"] = c.fit_tmin;
  }
  return j;
}

inline void write_header(Writer& w, const ExperimentConfig& c) {
  Json j;
  j["version"] = "0.1.0";
  j["config"] = config_json(c);
  j["seed"] = c.seed;
  j["timestamp"] = timestamp_utc();
  w.line(j.dump());
}

inline std::vector<int> t_values(const ExperimentConfig& c) {
  std::vector<int> out;
  for (int t = c.t_min; t <= c.t_max; ++t) out.push_back(t);
  return out;
}

}  // namespace experiment_detail

inline ExperimentConfig parse_config(const std::vector<std::string>& args) {
  ExperimentConfig cfg;
  CLI::App app{"magicflow: CSS-entropy growth under random qudit circuits"};
  app.require_subcommand(1);
  app.set_config("--config")->configurable(false);
  app.allow_config_extras(false);

  std::string t_text = "1";

  auto add_common = [&](CLI::App* sub, bool needs_d) {
    if (needs_d) sub->add_option("--d", cfg.d, "qudit dimension (prime)")->required();
    sub->add_option("--seed", cfg.seed, "rng seed")->envname("MAGICFLOW_SEED");
    sub->add_option("--out", cfg.out_path, "output path (default stdout)");
    sub->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  CLI::App* defects = app.add_subcommand("defects", "enumerate defect subspaces");
  add_common(defects, true);
  defects->add_option("--k", cfg.k, "replica count")->required();

  CLI::App* exact = app.add_subcommand("exact", "exact brick-wall ensembles");
  add_common(exact, true);
  exact->add_option("--N", cfg.n_list, "site count (even)")->required();
  exact->add_option("--t", t_text, "depth or lo:hi range")->required();
  exact->add_option("--M", cfg.ensemble, "ensemble size")->check(CLI::PositiveNumber);

  CLI::App* doped = app.add_subcommand("doped", "T-doped Clifford ensembles");
  add_common(doped, false);
  doped->add_option("--N", cfg.n_list, "site count (even)")->required();
  doped->add_option("--t", t_text, "depth or lo:hi range")->required();
  doped->add_option("--M", cfg.ensemble, "ensemble size")->check(CLI::PositiveNumber);
  doped->add_option("--t-per-layer", cfg.t_per_layer, "T gates per layer")
      ->check(CLI::NonNegativeNumber);

  CLI::App* tn = app.add_subcommand("tn", "replica tensor-network contraction");
  add_common(tn, true);
  tn->add_option("--N", cfg.n_list, "site counts (even)")->required();
  tn->add_option("--t", t_text, "depth or lo:hi range")->required();
  tn->add_option("--chi", cfg.chi, "bond cap")->check(CLI::PositiveNumber);
  tn->add_option("--cutoff", cfg.cutoff, "relative truncation cutoff");

  CLI::App* haar = app.add_subcommand("haar", "haar saturation values");
  add_common(haar, true);
  haar->add_option("--N", cfg.n_list, "site counts")->required();

  CLI::App* fit = app.add_subcommand("fit", "exponential decay fit");
  add_common(fit, false);
  fit->add_option("--in", cfg.in_path, "input csv")->required();
  fit->add_option("--ycol", cfg.ycol, "column to fit");
  fit->add_option("--tmin", cfg.fit_tmin, "window lower edge");
  fit->add_option("--tmax", cfg.fit_tmax, "window upper edge");

  CLI::App* validate = app.add_subcommand("validate", "cross-check tn against exact ensembles");
  add_common(validate, true);
  validate->add_option("--N", cfg.n_list, "site count (even)")->required();
  validate->add_option("--t", t_text, "depth or lo:hi range")->required();
  validate->add_option("--M", cfg.ensemble, "ensemble size")->check(CLI::PositiveNumber);
  validate->add_option("--chi", cfg.chi, "bond cap")->check(CLI::PositiveNumber);
  validate->add_option("--cutoff", cfg.cutoff, "relative truncation cutoff");

  std::vector<const char*> argv;
  argv.push_back("magicflow");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help() << std::flush;
    throw;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  for (auto* sub : app.get_subcommands()) cfg.mode = sub->get_name();
  if (cfg.mode != "defects" && cfg.mode != "haar" && cfg.mode != "fit")
    experiment_detail::parse_t_range(t_text, cfg.t_min, cfg.t_max);
  if (cfg.mode == "defects" || cfg.mode == "fit") cfg.format = "json";
  if (cfg.mode == "exact" || cfg.mode == "doped" || cfg.mode == "validate") {
    if (cfg.n_list.size() != 1)
      throw UsageError(cfg.mode + ": exactly one --N value expected");
  }
  return cfg;
}

inline ExperimentConfig parse_config(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return parse_config(args);
}

namespace experiment_detail {

inline void run_defects(const ExperimentConfig& c, Writer& w) {
  const auto subs = find_defect_subspaces(c.d, c.k);
  Json arr = Json::array();
  for (const auto& a : subs) {
    Json j;
    j["d"] = a.d;
    j["k"] = a.k;
    j["dim"] = a.r_A;
    j["size"] = a.size();
    j["generators"] = a.generators;
    j["elements"] = a.elements;
    arr.push_back(std::move(j));
  }
  Json body;
  body["count"] = subs.size();
  body["subspaces"] = std::move(arr);
  w.line(body.dump());
}

inline void write_ensemble_csv(Writer& w, const EnsembleStats& stats) {
  w.line("t,quenched_mean,quenched_err,annealed,annealed_err,M,seed");
  for (size_t i = 0; i < stats.depths.size(); ++i) {
    std::ostringstream row;
    row << stats.depths[i] << ',' << format_double(stats.quenched_mean[i]) << ','
        << format_double(stats.quenched_err[i]) << ',' << format_double(stats.annealed[i])
        << ',' << format_double(stats.annealed_err[i]) << ',' << stats.samples << ','
        << stats.seed;
    w.line(row.str());
  }
}

inline void run_exact(const ExperimentConfig& c, Writer& w) {
  CircuitSpec spec{c.d, c.n_list[0], c.t_max, c.seed, c.ensemble};
  const auto stats = ensemble_averages(spec, DefectSubspace::y_family(c.d), t_values(c),
                                       c.threads);
  write_ensemble_csv(w, stats);
}

inline void run_doped(const ExperimentConfig& c, Writer& w) {
  DopedCliffordSpec spec{c.n_list[0], c.t_max, c.t_per_layer, c.seed, c.ensemble};
  const auto stats = run_doped_clifford(spec, t_values(c), c.threads);
  write_ensemble_csv(w, stats);
}

inline void run_tn(const ExperimentConfig& c, Writer& w) {
  w.line("d,N,t,chi,log_upsilon,Y,Y_haar,delta_Y,max_bond,discarded_weight");
  const DefectSubspace a = DefectSubspace::y_family(c.d);
  for (int n : c.n_list) {
    const auto ts = t_values(c);
    const auto res = contract_depth_scan(n, ts, c.d, c.chi, c.cutoff);
    const double y_haar = haar_css_entropy(a, n).y;
    for (size_t i = 0; i < ts.size(); ++i) {
      const double y = -res[i].log_upsilon;
      std::ostringstream row;
      row << c.d << ',' << n << ',' << ts[i] << ',' << c.chi << ','
          << format_double(res[i].log_upsilon) << ',' << format_double(y) << ','
          << format_double(y_haar) << ',' << format_double(y_haar - y) << ','
          << res[i].diag.max_bond << ',' << format_double(res[i].diag.discarded_weight);
      w.line(row.str());
    }
  }
}

inline void run_haar(const ExperimentConfig& c, Writer& w) {
  w.line("d,N,Y,log_upsilon");
  const DefectSubspace a = DefectSubspace::y_family(c.d);
  for (int n : c.n_list) {
    const HaarValue v = haar_css_entropy(a, n);
    std::ostringstream row;
    row << c.d << ',' << n << ',' << format_double(v.y) << ',' << format_double(v.upsilon_log);
    w.line(row.str());
  }
}

inline void run_fit(const ExperimentConfig& c, Writer& w) {
  std::ifstream in(c.in_path);
  if (!in) throw UsageError("fit: cannot open " + c.in_path);
  std::string line;
  std::vector<std::string> header;
  std::vector<std::pair<double, double>> series;
  int t_col = -1, y_col = -1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '{') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (header.empty()) {
      header = cells;
      for (size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "t") t_col = static_cast<int>(i);
        if (header[i] == c.ycol) y_col = static_cast<int>(i);
      }
      if (t_col < 0 || y_col < 0)
        throw UsageError("fit: columns 't' and '" + c.ycol + "' required");
      continue;
    }
    try {
      series.push_back({std::stod(cells.at(t_col)), std::stod(cells.at(y_col))});
    } catch (const std::exception&) {
      throw UsageError("fit: unparseable row: " + line);
    }
  }
  const DecayFit fit = fit_decay(series, c.fit_tmin, c.fit_tmax);
  Json j;
  j["alpha"] = fit.alpha;
  j["stderr"] = fit.stderr_alpha;
  j["a"] = fit.a;
  j["t_window"] = {fit.t_min, fit.t_max};
  j["residual"] = fit.residual;
  j["points"] = fit.points;
  j["dropped"] = fit.dropped;
  w.line(j.dump());
}

// cross-path gate: |E_MC[Upsilon] - Upsilon_TN| within 3 standard errors
inline bool run_validate(const ExperimentConfig& c, Writer& w) {
  const int n = c.n_list[0];
  CircuitSpec spec{c.d, n, c.t_max, c.seed, c.ensemble};
  const auto ts = t_values(c);
  const auto stats =
      ensemble_averages(spec, DefectSubspace::y_family(c.d), ts, c.threads);
  const auto tn = contract_depth_scan(n, ts, c.d, c.chi, c.cutoff);
  w.line("d,N,t,chi,M,mc_mean_upsilon,mc_err_upsilon,tn_upsilon,diff_over_sigma,pass");
  bool all_pass = true;
  for (size_t i = 0; i < ts.size(); ++i) {
    // back out the mean and its error from the annealed log value
    const double mc_mean = std::exp(-stats.annealed[i]);
    const double mc_err = mc_mean * stats.annealed_err[i];
    const double tn_upsilon = std::exp(tn[i].log_upsilon);
    const double sigma = mc_err > 0 ? std::abs(mc_mean - tn_upsilon) / mc_err : 0.0;
    const bool pass = sigma <= 3.0;
    all_pass &= pass;
    std::ostringstream row;
    row << c.d << ',' << n << ',' << ts[i] << ',' << c.chi << ',' << c.ensemble << ','
        << format_double(mc_mean) << ',' << format_double(mc_err) << ','
        << format_double(tn_upsilon) << ',' << format_double(sigma) << ','
        << (pass ? 1 : 0);
    w.line(row.str());
  }
  return all_pass;
}

}  // namespace experiment_detail

// Runs the configured experiment; returns a process exit code.
inline int run_experiment(const ExperimentConfig& c) {
  experiment_detail::Writer writer(c.out_path);
  experiment_detail::write_header(writer, c);
  if (c.mode == "defects") {
    experiment_detail::run_defects(c, writer);
  } else if (c.mode == "exact") {
    experiment_detail::run_exact(c, writer);
  } else if (c.mode == "doped") {
    experiment_detail::run_doped(c, writer);
  } else if (c.mode == "tn") {
    experiment_detail::run_tn(c, writer);
  } else if (c.mode == "haar") {
    experiment_detail::run_haar(c, writer);
  } else if (c.mode == "fit") {
    experiment_detail::run_fit(c, writer);
  } else if (c.mode == "validate") {
    if (!experiment_detail::run_validate(c, writer)) return kExitValidation;
  } else {
    throw UsageError("unknown mode: " + c.mode);
  }
  return kExitOk;
}

}  // namespace magicflow
