#include "gridmarket/metering.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <stdexcept>

#include "gridmarket/util.hpp"

namespace gridmarket {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Samples per fundamental period, or -1 when the rate does not divide evenly.
int samples_per_period(const SampledWaveform& w) {
  const double exact = w.sample_rate / w.fundamental;
  const double rounded = std::round(exact);
  if (rounded < 1.0 || std::abs(exact - rounded) > 1e-9) return -1;
  return static_cast<int>(rounded);
}

}  // namespace

double SampledWaveform::rms() const {
  if (samples.empty()) return 0.0;
  double sum = 0.0;
  for (double x : samples) sum += x * x;
  return std::sqrt(sum / static_cast<double>(samples.size()));
}

SampledWaveform synthesize(double rms_fund, double phase,
                           const std::vector<Harmonic>& harmonics,
                           double sample_rate, int periods) {
  if (rms_fund < 0.0) {
    throw std::invalid_argument("synthesize: negative RMS");
  }
  if (periods < 1) {
    throw std::invalid_argument("synthesize: need at least one period");
  }

  int max_order = 1;
  std::set<int> orders;
  for (const Harmonic& h : harmonics) {
    if (h.order < 1) {
      throw std::invalid_argument("synthesize: harmonic order must be >= 1");
    }
    if (h.magnitude < 0.0) {
      throw std::invalid_argument("synthesize: negative harmonic magnitude");
    }
    if (!orders.insert(h.order).second) {
      throw std::invalid_argument(
          strformat("synthesize: duplicate harmonic order %d", h.order));
    }
    max_order = std::max(max_order, h.order);
  }

  SampledWaveform w;
  w.sample_rate = sample_rate;
  const int per_period = samples_per_period(w);
  if (per_period < 0) {
    throw std::invalid_argument(strformat(
        "synthesize: sample rate %.1f Hz is not a multiple of %.1f Hz",
        sample_rate, w.fundamental));
  }
  if (sample_rate < 20.0 * max_order * w.fundamental) {
    throw std::invalid_argument(strformat(
        "synthesize: sample rate %.1f Hz too low for harmonic order %d "
        "(need >= %.1f Hz)",
        sample_rate, max_order, 20.0 * max_order * w.fundamental));
  }

  const int total = per_period * periods;
  w.samples.resize(total);
  const double omega = kTwoPi * w.fundamental / sample_rate;  // rad per sample
  for (int n = 0; n < total; ++n) {
    double x = kSqrt2 * rms_fund * std::sin(omega * n + phase);
    for (const Harmonic& h : harmonics) {
      x += kSqrt2 * rms_fund * h.magnitude * std::sin(h.order * omega * n + h.phase);
    }
    w.samples[n] = x;
  }
  return w;
}

PQReading pq_integration(const SampledWaveform& v, const SampledWaveform& i) {
  if (v.sample_rate != i.sample_rate || v.fundamental != i.fundamental) {
    throw std::invalid_argument("pq_integration: sample rates differ");
  }
  if (v.samples.size() != i.samples.size() || v.samples.empty()) {
    throw std::invalid_argument("pq_integration: stream lengths differ or empty");
  }
  const int per_period = samples_per_period(v);
  if (per_period < 0 || v.samples.size() % per_period != 0) {
    throw std::invalid_argument(
        "pq_integration: window must cover whole fundamental periods");
  }
  if (per_period % 4 != 0) {
    throw std::invalid_argument(strformat(
        "pq_integration: %d samples per period not divisible by 4; pick a "
        "sample rate that is a multiple of %.0f Hz",
        per_period, 4.0 * v.fundamental));
  }

  const std::size_t len = v.samples.size();
  const std::size_t quarter = static_cast<std::size_t>(per_period) / 4;
  double p = 0.0;
  double q = 0.0;
  for (std::size_t n = 0; n < len; ++n) {
    p += v.samples[n] * i.samples[n];
    q += v.samples[n] * i.samples[(n + quarter) % len];
  }
  PQReading out;
  out.p = p / static_cast<double>(len);
  out.q = q / static_cast<double>(len);
  out.method = PQMethod::integration;
  return out;
}

PQReading pq_fundamental(double v_rms, double i_rms, double theta) {
  if (v_rms < 0.0 || i_rms < 0.0) {
    throw std::invalid_argument("pq_fundamental: negative RMS");
  }
  PQReading out;
  out.p = v_rms * i_rms * std::cos(theta);
  out.q = v_rms * i_rms * std::sin(theta);
  out.method = PQMethod::fundamental;
  return out;
}

double fundamental_phase(const SampledWaveform& w) {
  if (w.samples.empty()) {
    throw std::invalid_argument("fundamental_phase: empty waveform");
  }
  const double omega = kTwoPi * w.fundamental / w.sample_rate;
  std::complex<double> bin{0.0, 0.0};
  for (std::size_t n = 0; n < w.samples.size(); ++n) {
    bin += w.samples[n] *
           std::exp(std::complex<double>(0.0, -omega * static_cast<double>(n)));
  }
  // For x = sqrt2*X*sin(wn+phi) the projection lands at phi - pi/2.
  return std::arg(bin) + std::numbers::pi / 2.0;
}

MeterComparison compare_methods(const SampledWaveform& v,
                                const SampledWaveform& i) {
  MeterComparison cmp;
  cmp.integration = pq_integration(v, i);
  const double theta = fundamental_phase(v) - fundamental_phase(i);
  cmp.fundamental = pq_fundamental(v.rms(), i.rms(), theta);
  const double diff = std::abs(cmp.fundamental.p - cmp.integration.p);
  if (std::abs(cmp.integration.p) < 1.0) {
    cmp.deviation = diff;
    cmp.deviation_is_watts = true;
  } else {
    cmp.deviation = diff / std::abs(cmp.integration.p);
  }
  return cmp;
}

std::vector<Harmonic> default_inverter_distortion() {
  return {{3, 0.05, 0.0}, {5, 0.03, 0.0}, {7, 0.02, 0.0}};
}

}  // namespace gridmarket
