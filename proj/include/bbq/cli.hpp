// cli.hpp: run configuration (strict JSON with unit-suffixed keys) and the
// command dispatcher behind the `bbq` executable.
#pragma once

#include "bbq/dynamics.hpp"
#include "bbq/hilbert.hpp"
#include "bbq/pulse.hpp"
#include "bbq/rb.hpp"
#include "bbq/spectrum.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bbq::cli {

const std::vector<std::string>& commands();

struct AxisConfig {
    std::string parameter;  // q2_frequency_ghz | bus_frequency_ghz | flux_phi0
    std::vector<double> values;
};

struct FitConfig {
    bool synthetic = true;  // generate data from the device block with seeded noise
    double noise_fraction = 0.02;
    double initial_coupling_scale = 0.9;
    std::vector<FluxZZPoint> data;  // used when synthetic is false
    std::string data_path;          // CSV with columns flux_phi0,zz_mhz
    bool fit_squid = false;
    FitWeighting weighting = FitWeighting::Relative;
    int max_iterations = 200;
};

struct RunConfig {
    std::string command;
    DeviceSpec device;
    std::vector<AxisConfig> sweep_axes;
    double bracket_lo_ghz = 2.0;
    double bracket_hi_ghz = 4.0;
    ZeroSearchOptions zero;
    std::vector<double> flux_phi0;
    FitConfig fit;
    PulseParams pulse;
    std::optional<double> pulse_delay_ns;
    std::string waveform_kind = "detuning";
    PropagationConfig propagation;
    bool gate_calibrate = true;
    CalibrationOptions calibration;
    std::vector<double> amplitude_scales;
    std::vector<double> delays_ns;
    bool delay_calibrate = false;
    double delay_lo_ns = 0.0;
    double delay_hi_ns = 120.0;
    double iswap_tolerance_rad = 0.01;
    RBConfig rb;
    std::string noise_model = "depolarizing";
    double noise_cz_error = 0.0015;
    std::string output_path;
    std::string output_format = "csv";
    std::uint64_t seed = 1;
};

/// Parses a run configuration. Unknown keys and type mismatches raise
/// ConfigError naming the dotted path. Missing keys take command defaults.
RunConfig parse_config(const nlohmann::json& j, const std::string& command);

/// Effective configuration with every default resolved; parse_config of the
/// result reproduces the same RunConfig.
nlohmann::json to_json(const RunConfig& cfg);

/// Applies "a.b.c=value". The value is parsed as JSON when possible and kept
/// as a string otherwise.
void apply_override(nlohmann::json& j, const std::string& assignment);

/// Full CLI: returns the process exit code (0 ok, 2 configuration error,
/// 3 numerical error). The one-line JSON summary goes to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bbq::cli
