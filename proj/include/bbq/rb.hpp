// rb.hpp: randomized benchmarking simulation, decay fits and EPC/EPG algebra.
#pragma once

#include "bbq/errors.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bbq {

struct GateReport;

// ---------------------------------------------------------------------------
// Deterministic random numbers
//
// SplitMix64: stream s of seed k starts from splitmix64(k ⊕ splitmix64(s)) and
// advances by the golden-ratio increment γ per draw. Uniform integers in [0, n) use rejection on
// the top 64-bit range so no platform-specific distribution is involved.

class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);
    std::uint64_t next();
    std::uint64_t uniform_index(std::uint64_t n);
    double uniform01();

private:
    std::uint64_t state_;
};

std::uint64_t splitmix64(std::uint64_t x);

// ---------------------------------------------------------------------------
// Noise

enum class NoiseKind { Ideal, Depolarizing, CustomKraus };

std::string to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& name);

struct NoiseModel {
    NoiseKind kind = NoiseKind::Ideal;
    /// Average gate error per CZ for the depolarizing model; the channel is
    /// ρ → pρ + (1−p)·Tr(ρ)·I/4 with p = 1 − 4ε/3.
    double cz_error = 0.0;
    /// Actual CZ operator on the computational block for CustomKraus; norm
    /// lost from the block flows to an absorbing sink level.
    Eigen::Matrix4cd cz_operator = Eigen::Matrix4cd::Identity();

    static NoiseModel ideal();
    static NoiseModel depolarizing(double cz_error);
    static NoiseModel from_gate_report(const GateReport& report);
    void validate() const;
};

/// Depolarizing parameter of one Clifford averaged over the group for a
/// per-CZ depolarizing parameter p_cz: Σ_k n_k·p_cz^k / 11520.
double clifford_depolarizing_parameter(double p_cz);

// ---------------------------------------------------------------------------
// Fits and conversions

struct DecayFit {
    double A = 0.0;
    double p = 1.0;
    double B = 0.25;
    double A_err = 0.0;
    double p_err = 0.0;
    double B_err = 0.0;
    bool covariance_ok = true;  // false when parameters are unidentifiable
    double residual_norm = 0.0;
};

class DecayFitError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Fits A·p^m + B with 0 < p ≤ 1 and A, B ∈ [0, 1]. Flat data above 1/4
/// returns p = 1 with covariance_ok = false; flat data at or below 1/4 throws.
DecayFit fit_decay(const std::vector<double>& depths, const std::vector<double>& survival);

double epc_from_p(double p);
double epg_bound(double epc, double avg_cz);

struct ReadoutCorrection {
    Eigen::Vector4d corrected;
    double residual = 0.0;  // probability mass removed by clipping negatives
};

class CorrectionError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Solves confusion·x = raw (columns of `confusion` are P(measured | prepared)),
/// clips negatives and renormalizes.
ReadoutCorrection readout_correction(const Eigen::Vector4d& raw, const Eigen::Matrix4d& confusion);

// ---------------------------------------------------------------------------
// Simulation

struct RBConfig {
    std::vector<int> depths{1, 10, 25, 50, 100, 200, 300, 500};
    int sequences_per_depth = 30;
    std::uint64_t seed = 1;
    int threads = 1;
    std::optional<Eigen::Matrix4d> readout_confusion;  // applied to outcome probabilities
    bool readout_correct = false;                      // undo it with readout_correction
    void validate() const;
};

struct RBResult {
    std::vector<int> depths;
    std::vector<double> survival;      // mean P(00)
    std::vector<double> survival_sem;  // standard error of the mean
    DecayFit fit;
    double epc = 0.0;
    double epg_bound = 0.0;  // epc / avg CZ per Clifford
    bool interleaved = false;
    std::uint64_t seed = 0;
    int sequences_per_depth = 0;
};

RBResult simulate_rb(const NoiseModel& noise, const RBConfig& config);

struct IRBResult {
    RBResult reference;
    RBResult interleaved;
    double epg = 0.0;
    double epg_err = 0.0;
    bool unphysical = false;  // p_int > p_ref beyond the fit error
};

IRBResult simulate_irb(const NoiseModel& noise, const RBConfig& config);

/// Survival of a single sequence; exposed for tests. Element indices are
/// applied left to right, followed by the recovery element.
double sequence_survival(const NoiseModel& noise, const std::vector<std::size_t>& elements,
                         bool interleave_cz, const RBConfig& config);

}  // namespace bbq
