#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "magicflow/defect.hpp"

namespace magicflow {

// unsigned Stirling numbers of the first kind: permutations of n elements
// with exactly k cycles
inline long long stirling_cycle(int n, int k) {
  if (n < 1 || n > 8 || k < 1 || k > n) throw UsageError("stirling_cycle: need 1 <= k <= n <= 8");
  std::vector<std::vector<long long>> c(n + 1, std::vector<long long>(n + 1, 0));
  c[0][0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= i; ++j) c[i][j] = c[i - 1][j - 1] + (i - 1) * c[i - 1][j];
  return c[n][k];
}

struct HaarValue {
  int d = 2;
  int N = 1;
  double upsilon_log = 0;  // log E_Haar[Upsilon_A]
  double y = 0;            // -upsilon_log
};

// E[Upsilon_A] = sum_pi c_pi^N / prod_{j<k} (d^N + j), evaluated in log space
inline HaarValue haar_css_entropy(const DefectSubspace& a, int n) {
  if (n < 1) throw UsageError("haar_css_entropy: N must be >= 1");
  const OverlapTable table = css_overlap_table(a);
  double max_term = -1e300;
  std::vector<double> terms;
  terms.reserve(table.values.size());
  for (long long c : table.values) {
    if (c <= 0) throw NumericalError("haar_css_entropy: non-positive overlap");
    const double t = n * std::log(static_cast<double>(c));
    terms.push_back(t);
    max_term = std::max(max_term, t);
  }
  double acc = 0;
  for (double t : terms) acc += std::exp(t - max_term);
  const double log_num = max_term + std::log(acc);

  const double logdn = n * std::log(static_cast<double>(a.d));
  double log_den = 0;
  for (int j = 0; j < a.k; ++j) {
    // log(d^N + j) without forming d^N
    const double ratio = j == 0 ? 0.0 : std::exp(std::log(static_cast<double>(j)) - logdn);
    log_den += logdn + std::log1p(ratio);
  }
  HaarValue out;
  out.d = a.d;
  out.N = n;
  out.upsilon_log = log_num - log_den;
  out.y = -out.upsilon_log;
  return out;
}

// closed forms for the Y_d family: log(4/(2^N+3)) and log(3/(3^N+2))
inline double haar_y_closed_form(int d, int n) {
  if (d == 2) return n * std::log(2.0) + std::log1p(3.0 * std::pow(2.0, -n)) - std::log(4.0);
  if (d == 3) return n * std::log(3.0) + std::log1p(2.0 * std::pow(3.0, -n)) - std::log(3.0);
  throw UsageError("haar_y_closed_form: only d in {2, 3}");
}

struct DecayFit {
  double alpha = 0;        // decay rate per layer
  double a = 0;            // prefactor of exp(-alpha t) for the fitted series
  double t_min = 0;
  double t_max = 0;
  double residual = 0;     // rms of log residuals
  double stderr_alpha = 0;
  int points = 0;
  int dropped = 0;         // non-positive deltaY values in the window
};

// least squares on (t, log deltaY) over t >= t_min
inline DecayFit fit_decay(const std::vector<std::pair<double, double>>& series, double t_min,
                          double t_max = 1e300) {
  std::vector<double> ts, ys;
  int dropped = 0;
  for (const auto& [t, dy] : series) {
    if (t < t_min || t > t_max) continue;
    if (dy <= 0) {
      ++dropped;
      continue;
    }
    ts.push_back(t);
    ys.push_back(std::log(dy));
  }
  if (ts.size() < 4) throw UsageError("fit_decay: fewer than 4 usable points");
  const int n = static_cast<int>(ts.size());
  double st = 0, sy = 0;
  for (int i = 0; i < n; ++i) {
    st += ts[i];
    sy += ys[i];
  }
  const double tbar = st / n, ybar = sy / n;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (ts[i] - tbar) * (ts[i] - tbar);
    sxy += (ts[i] - tbar) * (ys[i] - ybar);
  }
  if (sxx == 0) throw UsageError("fit_decay: degenerate abscissa");
  const double slope = sxy / sxx;
  const double intercept = ybar - slope * tbar;
  double rss = 0;
  for (int i = 0; i < n; ++i) {
    const double r = ys[i] - (intercept + slope * ts[i]);
    rss += r * r;
  }
  DecayFit fit;
  fit.alpha = -slope;
  fit.a = std::exp(intercept);
  fit.t_min = ts.front();
  fit.t_max = ts.back();
  fit.points = n;
  fit.dropped = dropped;
  fit.residual = std::sqrt(rss / n);
  fit.stderr_alpha = n > 2 ? std::sqrt(rss / (n - 2) / sxx) : 0.0;
  return fit;
}

// t at which a N exp(-alpha t) crosses epsilon
inline double saturation_time(double alpha, double n, double epsilon, double a = 1.0) {
  if (alpha <= 0 || epsilon <= 0) throw UsageError("saturation_time: alpha, epsilon must be > 0");
  return std::log(n * a / epsilon) / alpha;
}

// global-Clifford doped reference: DeltaY = Y2_haar + log(Upsilon2_haar + (3/4)^t)
inline double doped_reference_curve(double t, int n) {
  if (t < 0) throw UsageError("doped_reference_curve: t must be >= 0");
  const double y_haar = haar_y_closed_form(2, n);
  const double upsilon_haar = std::exp(-y_haar);
  return y_haar + std::log(upsilon_haar + std::pow(0.75, t));
}

}  // namespace magicflow
