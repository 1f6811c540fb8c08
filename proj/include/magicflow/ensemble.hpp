#pragma once

#include <cmath>
#include <thread>
#include <vector>

#include "magicflow/css_exact.hpp"
#include "magicflow/statevector.hpp"

namespace magicflow {

// Per-depth quenched and annealed averages with jackknife errors.
struct EnsembleStats {
  std::vector<int> depths;
  std::vector<double> quenched_mean;
  std::vector<double> quenched_err;
  std::vector<double> annealed;
  std::vector<double> annealed_err;
  int samples = 0;
  uint64_t seed = 0;
};

namespace ensemble_detail {

// jackknife standard error of -log(mean)
inline double jackknife_annealed_err(const std::vector<double>& ups) {
  const size_t m = ups.size();
  if (m < 2) return 0.0;
  double total = 0;
  for (double u : ups) total += u;
  std::vector<double> theta(m);
  double theta_bar = 0;
  for (size_t i = 0; i < m; ++i) {
    theta[i] = -std::log((total - ups[i]) / (m - 1));
    theta_bar += theta[i];
  }
  theta_bar /= m;
  double s = 0;
  for (size_t i = 0; i < m; ++i) s += (theta[i] - theta_bar) * (theta[i] - theta_bar);
  return std::sqrt(s * (m - 1) / m);
}

// jackknife of the plain mean reduces to the classical standard error
inline double jackknife_mean_err(const std::vector<double>& xs) {
  const size_t m = xs.size();
  if (m < 2) return 0.0;
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= m;
  double var = 0;
  for (double x : xs) var += (x - mean) * (x - mean);
  return std::sqrt(var / (m - 1) / m);
}

}  // namespace ensemble_detail

// Evaluate Upsilon_A after every recorded depth for M independent circuit
// realizations; realization r uses rng.child(r) so results are identical for
// any thread count.
template <typename LayerFn>
EnsembleStats ensemble_run(int d, int n, const std::vector<int>& depths, int samples,
                           uint64_t seed, int threads, const DefectSubspace& a,
                           LayerFn&& layer_fn) {
  if (samples < 1) throw UsageError("ensemble_run: M must be >= 1");
  std::vector<int> sorted = depths;
  std::sort(sorted.begin(), sorted.end());
  const int t_max = sorted.empty() ? 0 : sorted.back();
  std::vector<std::vector<double>> ups(sorted.size(), std::vector<double>(samples, 0.0));

  RngStream master(seed);
  const bool fast = is_y_family(a);
  auto worker = [&](int lo, int hi) {
    for (int m = lo; m < hi; ++m) {
      RngStream rng = master.child(static_cast<uint64_t>(m));
      StateVector s = init_zero_state(d, n);
      size_t cursor = 0;
      for (int t = 0; t <= t_max; ++t) {
        if (t > 0) layer_fn(s, t, rng);
        while (cursor < sorted.size() && sorted[cursor] == t) {
          ups[cursor][m] = fast ? css_upsilon_pauli_spectrum(s) : css_upsilon_replica(s, a);
          ++cursor;
        }
      }
    }
  };
  threads = std::max(1, threads);
  if (threads == 1) {
    worker(0, samples);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (samples + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
      const int lo = w * chunk, hi = std::min(samples, (w + 1) * chunk);
      if (lo < hi) pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  EnsembleStats out;
  out.depths = sorted;
  out.samples = samples;
  out.seed = seed;
  for (size_t ti = 0; ti < sorted.size(); ++ti) {
    const auto& u = ups[ti];
    double mean_u = 0;
    std::vector<double> ys(u.size());
    for (size_t i = 0; i < u.size(); ++i) {
      if (u[i] <= 0) throw NumericalError("ensemble_run: non-positive Upsilon sample");
      mean_u += u[i];
      ys[i] = -std::log(u[i]);
    }
    mean_u /= u.size();
    double mean_y = 0;
    for (double y : ys) mean_y += y;
    mean_y /= ys.size();
    out.quenched_mean.push_back(mean_y);
    out.quenched_err.push_back(ensemble_detail::jackknife_mean_err(ys));
    out.annealed.push_back(-std::log(mean_u));
    out.annealed_err.push_back(ensemble_detail::jackknife_annealed_err(u));
  }
  return out;
}

// quenched and annealed Y_A statistics under brick-wall Haar circuits
inline EnsembleStats ensemble_averages(const CircuitSpec& spec, const DefectSubspace& a,
                                       const std::vector<int>& depths, int threads = 1) {
  spec.validate();
  if (spec.ensemble < 2) throw UsageError("ensemble_averages: M must be >= 2");
  return ensemble_run(spec.d, spec.N, depths, spec.ensemble, spec.seed, threads, a,
                      [](StateVector& s, int t, RngStream& rng) {
                        apply_brickwall_layer(s, t, rng);
                      });
}

// Y_2 statistics under uniform-Clifford brick-wall layers doped with T gates
inline EnsembleStats run_doped_clifford(const DopedCliffordSpec& spec,
                                        const std::vector<int>& depths, int threads = 1) {
  spec.validate();
  if (spec.N > 14) throw ResourceError("run_doped_clifford: N must be <= 14");
  return ensemble_run(2, spec.N, depths, spec.ensemble, spec.seed, threads,
                      DefectSubspace::y_family(2),
                      [count = spec.t_gates_per_layer](StateVector& s, int t, RngStream& rng) {
                        apply_doped_layer(s, t, count, rng);
                      });
}

}  // namespace magicflow
