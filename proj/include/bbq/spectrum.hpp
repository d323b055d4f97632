// Dressed-state labeling, ZZ (conditional frequency shift),
// ZZ landscapes, SQUID flux dispersion and coupling fits.

#pragma once

#include "bbq/errors.hpp"
#include "bbq/hilbert.hpp"
#include "bbq/numeric.hpp"

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bbq {

/// Labels whose dressed energies are needed for ZZ.
const std::vector<BareLabel>& computational_labels();
/// Computational labels plus the single- and two-photon bus states.
const std::vector<BareLabel>& required_labels();

struct SpectrumResult {
    Eigen::VectorXd energies_ghz;   // ascending
    Eigen::MatrixXd eigenvectors;   // columns, same order as energies
    std::map<BareLabel, int> assignment;
    std::map<BareLabel, double> overlap_quality;

    double energy(const BareLabel& label) const;
};

/// Greedy maximal-overlap assignment of bare labels to eigenvector columns.
/// The label whose best remaining overlap is largest is assigned first; every
/// eigenvector is used at most once. Throws AmbiguousLabelingError when the
/// winning overlap falls below `floor`.
std::pair<std::map<BareLabel, int>, std::map<BareLabel, double>> assign_labels(
    const Eigen::MatrixXd& eigenvectors, const std::array<int, 3>& levels,
    const std::vector<BareLabel>& labels, double floor = 0.5);

SpectrumResult diagonalize_and_label(const DeviceSpec& spec, double bus_frequency_ghz,
                                     const std::vector<BareLabel>& labels = required_labels());
SpectrumResult diagonalize_and_label(const SystemModel& model, double bus_frequency_ghz,
                                     const std::vector<BareLabel>& labels = required_labels());

/// ZZ = E(11;0) - E(01;0) - E(10;0) + E(00;0), returned in MHz.
double compute_zz(const DeviceSpec& spec, double bus_frequency_ghz);
double compute_zz(const SystemModel& model, double bus_frequency_ghz);

// ---------------------------------------------------------------------------
// Landscapes

enum class SweepParameter { Q2Frequency, BusFrequency, Flux };

std::string to_string(SweepParameter p);
SweepParameter sweep_parameter_from_string(const std::string& name);

struct SweepAxis {
    SweepParameter parameter = SweepParameter::BusFrequency;
    std::vector<double> values;
};

struct ZZMap {
    std::vector<SweepAxis> axes;       // one or two
    std::vector<double> zz_mhz;        // row-major over axes; NaN where masked
    std::vector<bool> mask;            // true where labeling failed
    std::vector<std::string> reasons;  // empty unless masked

    std::size_t size() const { return zz_mhz.size(); }
    std::size_t index(std::size_t i, std::size_t j = 0) const;
};

/// Evaluates ZZ on the grid; cells whose labeling fails are masked, not fatal.
ZZMap zz_sweep(const DeviceSpec& spec, const std::vector<SweepAxis>& axes, int threads = 1);

// ---------------------------------------------------------------------------
// Effective coupling

enum class ExchangeApproximation {
    /// J_bus = g1·g2·(1/(ω1−ωb) + 1/(ω2−ωb)), the rotating-wave closed form
    /// usually written for a tunable bus.
    Quoted,
    /// Second-order Schrieffer-Wolff exchange including counter-rotating terms:
    /// J_bus = ½·g1·g2·(1/Δ1 + 1/Δ2 − 1/Σ1 − 1/Σ2).
    SchriefferWolff,
};

/// J_tot = J_bus + g_{Q1,Q2} in MHz. Throws ResonanceError on a zero denominator.
double perturbative_j(const DeviceSpec& spec, double bus_frequency_ghz,
                      ExchangeApproximation approximation = ExchangeApproximation::Quoted);

// ---------------------------------------------------------------------------
// Zero / minimum search

struct ZeroSearchOptions {
    double zz_tolerance_mhz = 1e-3;  // 1 kHz
    int scan_intervals = 32;         // used when the endpoints share a sign
    int max_refinements = 3;         // bracket narrowing after labeling failures
};

/// Bus frequency where ZZ changes sign inside [lo, hi]. When the endpoints share
/// a sign the bracket is scanned for the lowest sign-changing sub-interval.
/// Throws BracketError when ZZ keeps one sign throughout.
double find_zz_zero(const DeviceSpec& spec, double lo_ghz, double hi_ghz,
                    const ZeroSearchOptions& options = {});

struct ZZMinimum {
    double bus_frequency_ghz = 0.0;
    double zz_mhz = 0.0;
    bool is_root = false;
};

/// Idle point: a root of ZZ if one exists in the bracket, otherwise the
/// minimum of |ZZ| (golden section after a coarse scan).
ZZMinimum find_idle_point(const DeviceSpec& spec, double lo_ghz, double hi_ghz,
                          const ZeroSearchOptions& options = {});

// ---------------------------------------------------------------------------
// SQUID dispersion

/// f(Φ) = f_max·(d² + (1−d²)·cos²(π(Φ−Φ_off)))^¼
double flux_to_frequency(const SquidSpec& squid, double flux);

enum class FluxBranch { Positive, Negative };

/// Inverse on the monotone branch Φ−Φ_off ∈ [0, ½] (or its mirror).
double inverse_flux(const SquidSpec& squid, double frequency_ghz,
                    FluxBranch branch = FluxBranch::Positive);

struct FluxCurve {
    std::vector<double> flux;
    std::vector<double> bus_frequency_ghz;
    std::vector<double> zz_mhz;  // NaN where masked
    std::vector<bool> mask;
};

FluxCurve zz_vs_flux(const DeviceSpec& spec, const std::vector<double>& flux, int threads = 1);

// ---------------------------------------------------------------------------
// Coupling fit

struct FluxZZPoint {
    double flux = 0.0;
    double zz_mhz = 0.0;
};

/// Residual scaling. Relative divides each residual by max(|ZZ_measured|, floor),
/// the maximum-likelihood choice for multiplicative noise.
enum class FitWeighting { Absolute, Relative };

std::string to_string(FitWeighting w);
FitWeighting fit_weighting_from_string(const std::string& name);

struct CouplingFitOptions {
    bool fit_squid = false;  // also refine f_max, asymmetry and flux offset
    FitWeighting weighting = FitWeighting::Relative;
    double weight_floor_mhz = 1e-3;
    numeric::LeastSquaresOptions solver{};
};

struct CouplingFit {
    double g_q1_bus_ghz = 0.0;
    double g_q2_bus_ghz = 0.0;
    double g_q1_q2_ghz = 0.0;
    SquidSpec squid;
    double residual_norm_mhz = 0.0;  // unweighted
    double weighted_residual_norm = 0.0;
    /// Same order as `parameter_names`; empty when the covariance is singular.
    std::vector<double> standard_errors;
    std::vector<std::string> parameter_names;
    int iterations = 0;

    DeviceSpec apply(const DeviceSpec& initial) const;
};

class FitError : public NumericalError {
public:
    FitError(const std::string& what, CouplingFit best) : NumericalError(what), best_(best) {}
    const CouplingFit& best_so_far() const noexcept { return best_; }

private:
    CouplingFit best_;
};

CouplingFit fit_coupling_params(const std::vector<FluxZZPoint>& measured,
                                const DeviceSpec& initial,
                                const CouplingFitOptions& options = {});

}  // namespace bbq
