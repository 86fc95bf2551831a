#pragma once

#include <vector>

namespace gridmarket {

struct SampledWaveform {
  std::vector<double> samples;
  double sample_rate = 0.0;   // Hz
  double fundamental = 50.0;  // Hz

  double rms() const;
};

struct Harmonic {
  int order = 0;           // multiple of the fundamental
  double magnitude = 0.0;  // fraction of the fundamental RMS
  double phase = 0.0;      // rad
};

enum class PQMethod { integration, fundamental };

struct PQReading {
  double p = 0.0;  // W
  double q = 0.0;  // var
  PQMethod method = PQMethod::integration;
};

struct MeterComparison {
  PQReading integration;
  PQReading fundamental;
  double deviation = 0.0;           // fraction of |P_integration|, or watts
  bool deviation_is_watts = false;  // set when |P_integration| < 1 W
};

// x(t) = sqrt2*rms*sin(wt+phase) + sum_h sqrt2*rms*m_h*sin(h*wt+phase_h)
SampledWaveform synthesize(double rms_fund, double phase,
                           const std::vector<Harmonic>& harmonics,
                           double sample_rate, int periods);

// Sample-by-sample power: P averages v*i, Q averages v against i advanced
// by a quarter fundamental period (cyclic), so a lagging current yields
// positive reactive power.
PQReading pq_integration(const SampledWaveform& v, const SampledWaveform& i);

// Phasor shortcut P = V*I*cos(theta), Q = V*I*sin(theta). Callers feed it
// TOTAL RMS values; with distortion present that is exactly the method's
// blind spot.
PQReading pq_fundamental(double v_rms, double i_rms, double theta);

// Phase of the 50 Hz component via single-bin Fourier projection, in the
// sine convention used by synthesize().
double fundamental_phase(const SampledWaveform& w);

MeterComparison compare_methods(const SampledWaveform& v,
                                const SampledWaveform& i);

// Stand-in distortion for a household PV inverter.
std::vector<Harmonic> default_inverter_distortion();

}  // namespace gridmarket
