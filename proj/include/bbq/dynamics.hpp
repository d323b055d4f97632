// dynamics.hpp: time-dependent propagation under a bus-detuning waveform and
// extraction of CZ figures of merit in the idle dressed frame.
#pragma once

#include "bbq/hilbert.hpp"
#include "bbq/pulse.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace bbq {

enum class Integrator { PiecewiseExponential, RK4 };
enum class Frame { DressedIdle };

std::string to_string(Integrator method);
Integrator integrator_from_string(const std::string& name);

struct PropagationConfig {
    double step_dt_ns = 0.1;  // must not exceed the waveform's sample_dt
    Integrator method = Integrator::PiecewiseExponential;
    Frame frame = Frame::DressedIdle;
};

/// Bus frequency for a detuning sample: ω_bus = ω_Q1 − Δ.
double bus_frequency_for(const DeviceSpec& spec, double detuning_ghz);

/// Evolves the columns of `initial` through the waveform. Each sample interval
/// is split into ceil(sample_dt / step_dt) substeps; the piecewise-exponential
/// method uses exp(−i H(t_mid) h) with H linearly interpolated between samples.
/// Throws IntegrationError if the column Gram matrix drifts by more than 1e−6.
Eigen::MatrixXcd propagate_states(const SystemModel& model, const PulseWaveform& wf,
                                  const PropagationConfig& cfg, const Eigen::MatrixXcd& initial);

/// Full propagator U(T) in the bare product basis.
Eigen::MatrixXcd propagate(const DeviceSpec& spec, const PulseWaveform& wf,
                           const PropagationConfig& cfg = {});

/// max |U†U − I|.
double unitarity_error(const Eigen::MatrixXcd& u);

/// Dressed computational basis at a bus frequency: columns ordered 00, 01, 10,
/// 11 (Q1 digit first), signs fixed so the bare component is positive.
struct DressedBasis {
    Eigen::MatrixXd vectors;       // dim × 4
    std::array<double, 4> energies_rad_per_ns{};
};

DressedBasis dressed_computational_basis(const SystemModel& model, double bus_frequency_ghz);

struct GateReport {
    double cz_angle = 0.0;     // wrap(φ11 − φ10 − φ01 + φ00)
    double iswap_angle = 0.0;  // asin |⟨01|M|10⟩|
    double leakage = 0.0;
    std::array<double, 2> virtual_z{};  // Q1, Q2 phase corrections (rad)
    double fidelity = 0.0;
    double duration_ns = 0.0;
    std::array<double, 4> phases{};  // arg of the diagonal in the idle frame
    Eigen::Matrix4cd frame_operator = Eigen::Matrix4cd::Identity();  // before virtual Z
    Eigen::Matrix4cd projected = Eigen::Matrix4cd::Identity();       // after virtual Z

    /// |⟨out|M|in⟩|² with indices 0..3 for 00, 01, 10, 11.
    double transition_probability(int out, int in) const;
};

/// Average gate fidelity of a (possibly non-unitary) 4×4 block against CZ:
/// (|Tr(M†U)|² + Tr(M†M)) / 20.
double cz_fidelity(const Eigen::Matrix4cd& m);

GateReport gate_report(const DeviceSpec& spec, const PulseWaveform& wf,
                       const PropagationConfig& cfg = {});

struct AmplitudePoint {
    double scale = 0.0;
    double phase_control0 = 0.0;  // target (Q2) phase with Q1 in |0⟩
    double phase_control1 = 0.0;  // target phase with Q1 in |1⟩
    double cz_angle = 0.0;
    double leakage = 0.0;
    bool ok = false;
    std::string error;
};

/// Pulse with Δ₂ = Δ₁ − scale·(Δ₁ − Δ₂_base).
PulseParams scaled_pulse(const PulseParams& base, double scale);

std::vector<AmplitudePoint> amplitude_scan(const DeviceSpec& spec, const PulseParams& base,
                                           const std::vector<double>& scales,
                                           const PropagationConfig& cfg = {}, int threads = 1,
                                           std::optional<double> delay_ns = std::nullopt);

struct CalibrationOptions {
    double scale_lo = 0.0;
    double scale_hi = 1.5;
    int scan_points = 16;
    double tolerance_rad = 1e-4;
    std::optional<double> delay_ns;  // calibrate a double pulse when set
    int threads = 1;
};

struct CzCalibration {
    PulseParams params;
    double scale = 1.0;
    GateReport report;
};

/// Finds the smallest scale in [scale_lo, scale_hi] at which cz_angle reaches
/// ±π (phase unwrapped along a coarse scan, then Brent).
CzCalibration calibrate_cz(const DeviceSpec& spec, const PulseParams& base,
                           const PropagationConfig& cfg = {}, const CalibrationOptions& opts = {});

struct DelayPoint {
    double delay_ns = 0.0;  // as realized on the grid
    std::array<double, 4> p_excited_q1{};  // inputs 00, 01, 10, 11
    double swap_01_to_10 = 0.0;
    double swap_10_to_01 = 0.0;
    double cz_angle = 0.0;
    double iswap_angle = 0.0;
    double leakage = 0.0;
    bool ok = false;
    std::string error;
};

std::vector<DelayPoint> delay_scan(const DeviceSpec& spec, const PulseParams& single,
                                   const std::vector<double>& delays_ns,
                                   const PropagationConfig& cfg = {}, int threads = 1);

struct DelayCalibrationOptions {
    double iswap_tolerance_rad = 0.01;
    int scan_points = 32;
    int max_rounds = 5;
    CalibrationOptions cz{};
};

struct DelayCalibration {
    double delay_ns = 0.0;
    PulseParams params;
    GateReport report;
    int rounds = 0;
};

/// Alternates delay search (scan + golden section on iswap_angle) and CZ
/// amplitude re-calibration until both targets hold.
DelayCalibration calibrate_delay(const DeviceSpec& spec, const PulseParams& single,
                                 double delay_lo_ns, double delay_hi_ns,
                                 const PropagationConfig& cfg = {},
                                 const DelayCalibrationOptions& opts = {});

}  // namespace bbq
