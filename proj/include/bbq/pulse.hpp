// pulse.hpp: adiabatic bus-detuning pulse, sampling, double pulses and
// conversion between detuning and flux waveforms.
//
// Detuning convention: Δ_bus = ω_Q1 − ω_bus in GHz.
#pragma once

#include "bbq/hilbert.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace bbq {

struct PulseParams {
    double delta1_ghz = 2.0;       // idle detuning, start and end of the pulse
    double delta2_ghz = 0.25;      // detuning at t = 0
    double g_eff_ghz = 0.156;      // shaping coupling
    double turn_rate_per_ns = 0.3;  // a
    double half_length_ns = 30.0;  // l
    double sample_dt_ns = 0.1;

    /// Positivity of l, dt, g and a; Δ₁ and Δ₂ share a sign and |Δ₂| ≤ |Δ₁|.
    /// Δ₂ = Δ₁ is accepted and gives a flat pulse.
    void validate() const;
};

enum class WaveformKind { Detuning, Flux };

std::string to_string(WaveformKind kind);

struct PulseWaveform {
    std::vector<double> times_ns;
    std::vector<double> values;  // GHz for detuning, Φ/Φ0 for flux
    WaveformKind kind = WaveformKind::Detuning;
    double sample_dt_ns = 0.0;
    double half_length_ns = 0.0;  // effective l after grid rounding
    double delay_ns = 0.0;        // flat gap of a double pulse, 0 otherwise

    double duration_ns() const;
    /// Grid uniformity (1e-12 relative) and finite values.
    void validate() const;
};

/// θ = atan(Δ / 2g).
double quantization_angle(double delta_ghz, double g_eff_ghz);

/// Rate constant c in dθ/dt = c·atan(a·t).
double shape_rate_constant(const PulseParams& params);

/// Δ_bus(t) for |t| ≤ l. Endpoints return Δ₁ and the midpoint Δ₂ exactly.
double adiabatic_shape(const PulseParams& params, double t_ns);

/// Symmetric grid t_k = (2k − N)·dt/2, k = 0..N. When 2l is not a multiple of
/// dt, l is rounded up so that it is.
PulseWaveform sample_pulse(const PulseParams& params);

/// Two copies of the sampled pulse separated by a flat gap at Δ₁. The gap is
/// rounded to the nearest multiple of sample_dt. Times start at 0.
PulseWaveform compose_double_pulse(const PulseParams& single, double delay_ns);

/// Flat waveform at `delta_ghz` lasting `duration_ns` (rounded to the grid).
PulseWaveform constant_waveform(double delta_ghz, double duration_ns, double sample_dt_ns);

/// Pointwise inverse_flux of ω_bus = anchor − Δ on the chosen branch.
PulseWaveform to_flux_waveform(const PulseWaveform& wf, double anchor_qubit_frequency_ghz,
                               const SquidSpec& squid);
PulseWaveform to_detuning_waveform(const PulseWaveform& wf, double anchor_qubit_frequency_ghz,
                                   const SquidSpec& squid);

/// Trapezoid integral of (value − reference) over the waveform.
double waveform_area(const PulseWaveform& wf, double reference);

void write_waveform_csv(std::ostream& os, const PulseWaveform& wf);

}  // namespace bbq
