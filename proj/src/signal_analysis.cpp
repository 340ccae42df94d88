#include "eitcorr/signal_analysis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "eitcorr/errors.hpp"

namespace eitcorr {

namespace {

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double rms_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s / static_cast<double>(v.size()));
}

bool zero_mean(std::span<const double> v) {
  return std::abs(mean_of(v)) <= 1e-12 * rms_of(v);
}

// Removes the mean, repeating while rounding leaves a residual above the
// invariant threshold (matters when <I> >> rms(dI)). Returns the total
// amount removed.
double remove_mean(std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  if (*lo == *hi) {
    const double c = *lo;
    std::fill(v.begin(), v.end(), 0.0);
    return c;
  }
  double removed = 0.0;
  for (int pass = 0; pass < 4 && !zero_mean(v); ++pass) {
    const double m = mean_of(v);
    for (auto& x : v) x -= m;
    removed += m;
  }
  return removed;
}

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const double hi = v[mid];
  if (v.size() % 2) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lo + hi);
}

double outer_median(std::span<const double> ys) {
  const std::size_t n = ys.size();
  const std::size_t k = std::max<std::size_t>(1, n / 10);
  std::vector<double> outer;
  outer.insert(outer.end(), ys.begin(), ys.begin() + std::min(k, n));
  outer.insert(outer.end(), ys.end() - std::min(k, n), ys.end());
  return median(std::move(outer));
}

// Width between the first `level` crossings left and right of `peak`.
double crossing_width(std::span<const double> xs, std::span<const double> ys, std::size_t peak,
                      double level) {
  const double sign = ys[peak] > level ? 1.0 : -1.0;
  const auto above = [&](std::size_t i) { return sign * (ys[i] - level) > 0; };
  const auto interp = [&](std::size_t inner, std::size_t outer) {
    const double t = (ys[inner] - level) / (ys[inner] - ys[outer]);
    return xs[inner] + t * (xs[outer] - xs[inner]);
  };

  std::optional<double> left, right;
  for (std::size_t i = peak; i > 0; --i) {
    if (!above(i - 1)) {
      left = interp(i, i - 1);
      break;
    }
  }
  for (std::size_t i = peak; i + 1 < ys.size(); ++i) {
    if (!above(i + 1)) {
      right = interp(i, i + 1);
      break;
    }
  }
  if (!left || !right) throw NumericalError("no half-level crossing on both sides of the peak");
  return *right - *left;
}

std::mutex fftw_planner_mutex;

}  // namespace

IntensitySeries IntensitySeries::from_samples(double dt, std::span<const double> intensity) {
  if (intensity.empty()) throw std::invalid_argument("IntensitySeries: empty record");
  if (!(dt > 0)) throw std::invalid_argument("IntensitySeries: dt must be > 0");
  IntensitySeries s;
  s.dt = dt;
  s.fluctuations.assign(intensity.begin(), intensity.end());
  s.mean = remove_mean(s.fluctuations);
  return s;
}

IntensitySeries IntensitySeries::from_fluctuations(double dt, std::vector<double> fluctuations,
                                                   double mean) {
  if (fluctuations.empty()) throw std::invalid_argument("IntensitySeries: empty record");
  if (!(dt > 0)) throw std::invalid_argument("IntensitySeries: dt must be > 0");
  IntensitySeries s;
  s.dt = dt;
  s.fluctuations = std::move(fluctuations);
  s.mean = mean + remove_mean(s.fluctuations);
  return s;
}

double correlation_at_lag(std::span<const double> x, std::span<const double> y, long lag) {
  const long nx = static_cast<long>(x.size());
  const long ny = static_cast<long>(y.size());
  const long t0 = std::max(0L, -lag);
  const long t1 = std::min(nx, ny - lag);
  if (t1 - t0 < 2) throw std::invalid_argument("correlation_at_lag: overlap shorter than 2 samples");
  const double m = static_cast<double>(t1 - t0);

  double mx = 0.0, my = 0.0, scale_x = 0.0, scale_y = 0.0;
  for (long t = t0; t < t1; ++t) {
    mx += x[t];
    my += y[t + lag];
    scale_x = std::max(scale_x, std::abs(x[t]));
    scale_y = std::max(scale_y, std::abs(y[t + lag]));
  }
  mx /= m;
  my /= m;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (long t = t0; t < t1; ++t) {
    const double a = x[t] - mx;
    const double b = y[t + lag] - my;
    sxy += a * b;
    sxx += a * a;
    syy += b * b;
  }
  // A constant window leaves only rounding residue in the centred sums.
  const auto flat = [m](double s, double scale) { return s <= m * std::pow(1e-12 * scale, 2); };
  if (flat(sxx, scale_x) || flat(syy, scale_y)) {
    throw NumericalError("cross_correlation: zero variance in overlap window at lag " +
                         std::to_string(lag));
  }
  return sxy / std::sqrt(sxx * syy);
}

CorrelationCurve cross_correlation(const IntensitySeries& s1, const IntensitySeries& s2,
                                   double max_lag) {
  if (!(s1.dt > 0) || std::abs(s1.dt - s2.dt) > 1e-12 * s1.dt) {
    throw std::invalid_argument("cross_correlation: series must share dt");
  }
  if (!(max_lag >= 0)) throw std::invalid_argument("cross_correlation: max_lag must be >= 0");
  const double shortest = std::min(s1.duration(), s2.duration());
  if (max_lag > 0.2 * shortest * (1 + 1e-12)) {
    throw std::invalid_argument("cross_correlation: max_lag exceeds 20% of the record");
  }
  const long k = static_cast<long>(std::floor(max_lag / s1.dt + 1e-9));
  CorrelationCurve c;
  c.lags.reserve(2 * k + 1);
  c.values.reserve(2 * k + 1);
  for (long lag = -k; lag <= k; ++lag) {
    c.lags.push_back(static_cast<double>(lag) * s1.dt);
    c.values.push_back(correlation_at_lag(s1.fluctuations, s2.fluctuations, lag));
  }
  return c;
}

PeakStats peak_stats(const CorrelationCurve& curve) {
  if (curve.values.empty() || curve.values.size() != curve.lags.size()) {
    throw std::invalid_argument("peak_stats: empty or malformed curve");
  }
  const auto& v = curve.values;
  const std::size_t peak = static_cast<std::size_t>(
      std::max_element(v.begin(), v.end(),
                       [](double a, double b) { return std::abs(a) < std::abs(b); }) -
      v.begin());
  PeakStats s;
  s.peak_value = v[peak];
  s.peak_lag = curve.lags[peak];
  s.background = outer_median(v);
  if (!(std::abs(s.peak_value - s.background) > 0)) {
    throw NumericalError("peak_stats: flat curve");
  }
  s.fwhm = crossing_width(curve.lags, v, peak, 0.5 * (s.peak_value + s.background));
  return s;
}

PowerSpectrum power_spectrum(const IntensitySeries& s) {
  const std::size_t n = s.fluctuations.size();
  if (n < 8) throw std::invalid_argument("power_spectrum: need at least 8 samples");
  if (!(s.dt > 0)) throw std::invalid_argument("power_spectrum: dt must be > 0");

  std::vector<double> x(s.fluctuations);
  const double m = mean_of(x);
  double wsum2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / n));
    x[i] = (x[i] - m) * w;
    wsum2 += w * w;
  }

  const std::size_t bins = n / 2 + 1;
  auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins));
  if (!out) throw std::bad_alloc();
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex);
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), x.data(), out, FFTW_ESTIMATE);
  }
  fftw_execute(plan);

  const double fs = 1.0 / s.dt;
  PowerSpectrum ps;
  ps.frequencies.resize(bins);
  ps.psd.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    const double p = out[k][0] * out[k][0] + out[k][1] * out[k][1];
    const bool edge = k == 0 || (n % 2 == 0 && k == n / 2);
    ps.frequencies[k] = static_cast<double>(k) * fs / static_cast<double>(n);
    ps.psd[k] = (edge ? 1.0 : 2.0) * p / (fs * wsum2);
  }
  {
    std::lock_guard lock(fftw_planner_mutex);
    fftw_destroy_plan(plan);
  }
  fftw_free(out);
  return ps;
}

double median_frequency(const PowerSpectrum& spectrum) {
  const double total = std::accumulate(spectrum.psd.begin(), spectrum.psd.end(), 0.0);
  if (!(total > 0)) throw NumericalError("median_frequency: zero spectrum");
  double acc = 0.0;
  for (std::size_t k = 0; k < spectrum.psd.size(); ++k) {
    acc += spectrum.psd[k];
    if (acc >= 0.5 * total) return spectrum.frequencies[k];
  }
  return spectrum.frequencies.back();
}

double resonance_width(std::span<const double> xs, std::span<const double> ys, double baseline) {
  if (xs.size() != ys.size() || xs.size() < 3) {
    throw std::invalid_argument("resonance_width: need >= 3 paired samples");
  }
  std::size_t peak = 0;
  for (std::size_t i = 1; i < ys.size(); ++i) {
    if (std::abs(ys[i] - baseline) > std::abs(ys[peak] - baseline)) peak = i;
  }
  if (!(std::abs(ys[peak] - baseline) > 0)) throw NumericalError("resonance_width: flat response");
  return crossing_width(xs, ys, peak, 0.5 * (ys[peak] + baseline));
}

double resonance_width(std::span<const double> xs, std::span<const double> ys) {
  if (ys.size() < 3) throw std::invalid_argument("resonance_width: need >= 3 samples");
  return resonance_width(xs, ys, outer_median(ys));
}

IntensitySeries detector_response(const IntensitySeries& s, std::optional<double> highpass_hz,
                                  std::optional<double> lowpass_hz) {
  std::vector<double> y(s.fluctuations);
  if (y.empty()) return s;
  if (highpass_hz) {
    if (!(*highpass_hz > 0)) throw std::invalid_argument("detector high-pass corner must be > 0");
    const double rc = 1.0 / (2.0 * std::numbers::pi * *highpass_hz);
    const double a = rc / (rc + s.dt);
    double prev_in = y[0], prev_out = 0.0;
    y[0] = 0.0;
    for (std::size_t i = 1; i < y.size(); ++i) {
      const double in = y[i];
      prev_out = a * (prev_out + in - prev_in);
      prev_in = in;
      y[i] = prev_out;
    }
  }
  if (lowpass_hz) {
    if (!(*lowpass_hz > 0)) throw std::invalid_argument("detector low-pass corner must be > 0");
    const double rc = 1.0 / (2.0 * std::numbers::pi * *lowpass_hz);
    const double alpha = s.dt / (rc + s.dt);
    for (std::size_t i = 1; i < y.size(); ++i) y[i] = y[i - 1] + alpha * (y[i] - y[i - 1]);
  }
  return IntensitySeries::from_fluctuations(s.dt, std::move(y), s.mean);
}

}  // namespace eitcorr
