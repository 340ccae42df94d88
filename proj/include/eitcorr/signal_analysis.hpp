#pragma once

#include <optional>
#include <span>
#include <vector>

namespace eitcorr {

/// Intensity record <I> + dI(t). The fluctuation samples carry zero mean
/// (to 1e-12 of their RMS).
struct IntensitySeries {
  double dt = 0.0;
  double mean = 0.0;
  std::vector<double> fluctuations;

  /// Splits raw samples into mean and fluctuations.
  static IntensitySeries from_samples(double dt, std::span<const double> intensity);

  /// Accepts samples that already are fluctuations (mean removed) without
  /// touching them; removes the mean only when the zero-mean invariant does
  /// not already hold. Keeps re-ingested records bit-identical.
  static IntensitySeries from_fluctuations(double dt, std::vector<double> fluctuations,
                                           double mean = 0.0);

  double duration() const noexcept { return dt * static_cast<double>(fluctuations.size()); }
};

struct CorrelationCurve {
  std::vector<double> lags;    ///< s, symmetric about 0
  std::vector<double> values;  ///< G2(tau)
};

/// Normalised intensity cross-correlation
///   G2(tau) = <dI1(t) dI2(t+tau)> / sqrt(<dI1(t)^2> <dI2(t+tau)^2>)
/// with every average taken over the overlap of the two records at that lag
/// (no wraparound, no padding). Means and variances are recomputed on each
/// overlap window.
///
/// Requires equal dt and max_lag <= 20% of the record. Throws NumericalError
/// when either overlap window has zero variance.
CorrelationCurve cross_correlation(const IntensitySeries& s1, const IntensitySeries& s2,
                                   double max_lag);

/// G2 at a single lag of `lag_samples` samples (may be negative).
double correlation_at_lag(std::span<const double> x, std::span<const double> y, long lag_samples);

struct PeakStats {
  double peak_value = 0.0;
  double peak_lag = 0.0;
  double fwhm = 0.0;
  double background = 0.0;
};

/// Peak = sample of largest |G2|; background = median of the outer 20% of
/// lags (10% per side); fwhm at half height between peak and background,
/// linearly interpolated. Throws NumericalError on a flat curve or when a
/// half-height crossing is missing on either side.
PeakStats peak_stats(const CorrelationCurve& curve);

struct PowerSpectrum {
  std::vector<double> frequencies;  ///< Hz
  std::vector<double> psd;          ///< units^2 / Hz, one-sided
};

/// One-sided Hann-windowed periodogram of the mean-removed record,
/// normalised by the window power so that sum(psd) * df estimates the
/// variance. Requires at least 8 samples.
PowerSpectrum power_spectrum(const IntensitySeries& s);

/// Frequency below which half of the spectral power lies.
double median_frequency(const PowerSpectrum& spectrum);

/// FWHM of the dominant resonance in ys(xs). The baseline is the median of
/// the outer 20% of points (10% per side, at least one each); the extremum
/// is the point farthest from it. Walks outward from the extremum to the
/// first half-level crossing on each side, interpolating linearly. Throws
/// NumericalError when no crossing exists on a side.
double resonance_width(std::span<const double> xs, std::span<const double> ys);

/// Same, with an explicit baseline.
double resonance_width(std::span<const double> xs, std::span<const double> ys, double baseline);

/// Photodetector bandwidth: first-order high-pass then first-order low-pass
/// (corner frequencies in Hz; nullopt disables a stage). The result is
/// re-centred to zero mean.
IntensitySeries detector_response(const IntensitySeries& s, std::optional<double> highpass_hz,
                                  std::optional<double> lowpass_hz);

}  // namespace eitcorr
