#include <doctest.h>

#include "bbq/errors.hpp"
#include "bbq/presets.hpp"
#include "bbq/spectrum.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numbers>

using namespace bbq;

namespace {

DeviceSpec family(double q2, double g12) {
    DeviceSpec s = presets::bbq(5.0 - q2);
    s.set_coupling(Mode::Q1, Mode::Q2, g12);
    return s;
}

}  // namespace

TEST_CASE("labeling in the uncoupled limit") {
    DeviceSpec s = presets::bbq();
    for (auto& c : s.couplings) c.strength_ghz = 0.0;
    const auto r = diagonalize_and_label(s, 3.0);
    for (const auto& [label, col] : r.assignment) {
        CHECK(r.overlap_quality.at(label) == doctest::Approx(1.0));
        CHECK(std::abs(r.eigenvectors(basis_index(s.levels(), label), col)) == doctest::Approx(1.0));
    }
    CHECK(std::abs(compute_zz(s, 3.0)) < 1e-9);  // zero up to rounding of 2π-scaled energies
}

TEST_CASE("dressed qubit frequency near bare value when the bus is far") {
    const DeviceSpec s = presets::bbq();
    const auto r = diagonalize_and_label(s, 3.0);
    const double f10 = r.energy({1, 0, 0}) - r.energy({0, 0, 0});
    CHECK(std::abs(f10 - 5.0) < 5e-3);
    // Same quantity from the explicit oracle.
    const auto od = oracle::family(4.91, 3.0, -0.006);
    const auto e = oracle::jacobi(oracle::hamiltonian_ghz(od));
    const double o10 = oracle::dressed_energy(e, oracle::index_of(od, 1, 0, 0)) -
                       oracle::dressed_energy(e, oracle::index_of(od, 0, 0, 0));
    CHECK(f10 == doctest::Approx(o10).epsilon(1e-10));
}

TEST_CASE("resonant bus is ambiguous") {
    const DeviceSpec s = presets::bbq();
    try {
        diagonalize_and_label(s, s.mode(Mode::Q2).frequency_ghz);
        FAIL("expected AmbiguousLabelingError");
    } catch (const AmbiguousLabelingError& e) {
        CHECK(e.overlap() < 0.5);
        // Q1 sits 90 MHz away, so the hybridized triplet can fail on 10;0 first.
        const bool expected = e.label() == "01;0" || e.label() == "00;1" || e.label() == "10;0";
        CHECK(expected);
    }
}

TEST_CASE("ZZ matches the explicit oracle") {
    for (double g12 : {-0.006, 0.006}) {
        for (double bus : {2.6, 3.0, 3.4, 6.5, 7.0}) {
            const auto od = oracle::family(4.91, bus, g12);
            CHECK(compute_zz(family(4.91, g12), bus) == doctest::Approx(oracle::zz_mhz(od)).epsilon(1e-7));
        }
    }
}

TEST_CASE("ZZ is suppressed for a far-detuned bus without direct coupling") {
    const DeviceSpec s = family(4.91, 0.0);
    // Detuning of 50 GHz, ten times the largest other frequency in the problem.
    const double zz = compute_zz(s, 55.0);
    CHECK(std::abs(zz) < 0.01);
    CHECK(zz == doctest::Approx(oracle::zz_mhz(oracle::family(4.91, 55.0, 0.0))).epsilon(1e-5));
}

TEST_CASE("ZZ zero positions") {
    const double bbq_root = find_zz_zero(presets::bbq(), 2.0, 4.0);
    CHECK(bbq_root > 2.5);
    CHECK(bbq_root < 3.5);
    CHECK(std::abs(compute_zz(presets::bbq(), bbq_root)) < 1e-3);

    const double baq_root = find_zz_zero(presets::baq(), 6.0, 8.5);
    CHECK(baq_root > 6.0);
    CHECK(baq_root < 8.0);

    CHECK_THROWS_AS(find_zz_zero(family(4.91, 0.0), 2.0, 4.0), BracketError);
}

TEST_CASE("idle point of the pair-1-like device") {
    const auto idle = find_idle_point(presets::pair1_like(), 1.9, 2.5);
    CHECK(idle.bus_frequency_ghz == doctest::Approx(presets::kPair1IdleBusGhz).epsilon(1e-4));
    CHECK(std::abs(idle.zz_mhz) < 0.01);  // below 10 kHz
}

TEST_CASE("perturbative exchange") {
    DeviceSpec s = family(4.91, -0.006);
    const double quoted = perturbative_j(s, 3.0);
    CHECK(quoted == doctest::Approx(1e3 * (0.11 * 0.11 * (1.0 / 2.0 + 1.0 / 1.91) - 0.006)).epsilon(1e-12));
    CHECK(quoted == doctest::Approx(6.39).epsilon(1e-3));
    CHECK(perturbative_j(s, -1e9) == doctest::Approx(-6.0).epsilon(1e-6));
    s.set_coupling(Mode::Q1, Mode::Bus, 0.0);
    CHECK(perturbative_j(s, 3.0) == -6.0);
    CHECK(perturbative_j(s, 3.0, ExchangeApproximation::SchriefferWolff) == -6.0);
    CHECK_THROWS_AS(perturbative_j(s, 5.0), ResonanceError);
}

TEST_CASE("SQUID dispersion") {
    const SquidSpec sq{4.55, 0.2, 0.1};
    CHECK(flux_to_frequency(sq, 0.1) == doctest::Approx(4.55));
    CHECK(flux_to_frequency(sq, 0.6) == doctest::Approx(4.55 * std::sqrt(0.2)));
    const SquidSpec sym{4.0, 1.0, 0.0};
    for (double f : {0.0, 0.17, 0.5, 0.9}) CHECK(flux_to_frequency(sym, f) == doctest::Approx(4.0));
    for (double f : {0.11, 0.2, 0.35, 0.55}) {
        const double nu = flux_to_frequency(sq, f);
        CHECK(inverse_flux(sq, nu) == doctest::Approx(f).epsilon(1e-9));
        CHECK(flux_to_frequency(sq, 2 * 0.1 - f) == doctest::Approx(nu).epsilon(1e-12));
        CHECK(flux_to_frequency(sq, f + 1.0) == doctest::Approx(nu).epsilon(1e-12));
    }
    CHECK(inverse_flux(sq, flux_to_frequency(sq, 0.3), FluxBranch::Negative) == doctest::Approx(-0.1));
    CHECK_THROWS_AS(inverse_flux(sq, 5.0), RangeError);
    CHECK_THROWS_AS(inverse_flux(sq, 1.0), RangeError);
}

TEST_CASE("ZZ versus flux") {
    DeviceSpec flat = presets::pair1_like();
    flat.squid = SquidSpec{2.5, 1.0, 0.0};
    const auto c = zz_vs_flux(flat, {0.0, 0.2, 0.4});
    for (double z : c.zz_mhz) CHECK(z == doctest::Approx(compute_zz(flat, 2.5)).epsilon(1e-12));

    const DeviceSpec s = presets::pair1_like();
    const auto sym = zz_vs_flux(s, {0.13, -0.13, 1.13});
    CHECK(sym.zz_mhz[1] == doctest::Approx(sym.zz_mhz[0]).epsilon(1e-9));
    CHECK(sym.zz_mhz[2] == doctest::Approx(sym.zz_mhz[0]).epsilon(1e-9));

    std::vector<double> grid;
    for (int k = 0; k <= 200; ++k) grid.push_back(0.4 + 0.1 * k / 200.0);
    const auto fine = zz_vs_flux(s, grid, 4);
    double best = 1e9;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!fine.mask[k]) best = std::min(best, std::abs(fine.zz_mhz[k]));
    }
    CHECK(best < 0.01);
}

TEST_CASE("ZZ map masks resonances and is thread independent") {
    const DeviceSpec s = presets::bbq();
    SweepAxis q2{SweepParameter::Q2Frequency, {4.6, 4.76, 4.91}};
    SweepAxis bus{SweepParameter::BusFrequency, {3.0, 4.6, 4.91, 5.0, 6.0}};
    const auto a = zz_sweep(s, {q2, bus}, 1);
    const auto b = zz_sweep(s, {q2, bus}, 4);
    REQUIRE(a.size() == 15);
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a.mask[k] == b.mask[k]);
        if (!a.mask[k]) CHECK(a.zz_mhz[k] == b.zz_mhz[k]);
        if (a.mask[k]) {
            CHECK(std::isnan(a.zz_mhz[k]));
            CHECK(!a.reasons[k].empty());
        }
    }
    // Along the resonance lines cells are masked or carry a spike.
    auto flagged = [&](std::size_t c) { return a.mask[c] || std::abs(a.zz_mhz[c]) > 1.0; };
    CHECK(flagged(a.index(0, 1)));  // bus on Q2
    CHECK(flagged(a.index(2, 2)));
    CHECK(flagged(a.index(0, 3)));  // bus on Q1
    CHECK(!a.mask[a.index(1, 0)]);
}

TEST_CASE("coupling fit") {
    const DeviceSpec truth = presets::pair1_like();
    std::vector<double> flux;
    for (int k = 0; k < 26; ++k) flux.push_back(0.02 * k);
    const auto curve = zz_vs_flux(truth, flux);
    std::vector<FluxZZPoint> data;
    for (std::size_t k = 0; k < flux.size(); ++k) data.push_back({flux[k], curve.zz_mhz[k]});

    DeviceSpec init = truth;
    init.set_coupling(Mode::Q1, Mode::Bus, 0.117);
    init.set_coupling(Mode::Q2, Mode::Bus, 0.108);
    init.set_coupling(Mode::Q1, Mode::Q2, -0.0036);
    for (FitWeighting w : {FitWeighting::Relative, FitWeighting::Absolute}) {
        CouplingFitOptions opt;
        opt.weighting = w;
        const auto fit = fit_coupling_params(data, init, opt);
        CHECK(fit.g_q1_bus_ghz == doctest::Approx(0.13).epsilon(1e-3));
        CHECK(fit.g_q2_bus_ghz == doctest::Approx(0.12).epsilon(1e-3));
        CHECK(fit.g_q1_q2_ghz == doctest::Approx(-0.004).epsilon(1e-3));
    }

    CHECK_THROWS_AS(fit_coupling_params({data.begin(), data.begin() + 5}, init), ConfigError);
    DeviceSpec no_squid = init;
    no_squid.squid.reset();
    CHECK_THROWS_AS(fit_coupling_params(data, no_squid), ConfigError);
}
