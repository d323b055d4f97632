#include <doctest.h>

#include "bbq/clifford.hpp"
#include "bbq/dynamics.hpp"
#include "bbq/errors.hpp"
#include "bbq/presets.hpp"
#include "bbq/rb.hpp"

#include <cmath>
#include <complex>
#include <set>

using namespace bbq;

namespace {

bool projectively_equal(const Eigen::Matrix4cd& a, const Eigen::Matrix4cd& b, double tol) {
    const std::complex<double> overlap = (a.adjoint() * b).trace() / 4.0;
    return std::abs(std::abs(overlap) - 1.0) < tol;
}

}  // namespace

TEST_CASE("Clifford group") {
    const auto& g = CliffordGroup::instance();
    REQUIRE(g.size() == 11520);
    std::set<std::array<long long, 32>> keys;
    std::array<std::size_t, 4> by_cz{};
    for (std::size_t i = 0; i < g.size(); ++i) {
        keys.insert(projective_key(g[i].unitary));
        by_cz[static_cast<std::size_t>(g[i].cz_count)]++;
        CHECK(projectively_equal(sequence_unitary(g[i].sequence), g[i].unitary, 1e-9));
    }
    CHECK(keys.size() == 11520);
    CHECK(by_cz == std::array<std::size_t, 4>{576, 5184, 5184, 576});

    const auto& id = g[g.identity_index()];
    CHECK(id.cz_count == 0);
    CHECK(id.non_z_count == 0);
    CHECK(projectively_equal(id.unitary, Eigen::Matrix4cd::Identity(), 1e-12));

    const auto stats = decomposition_stats();
    CHECK(stats.avg_cz == 1.5);
    CHECK(stats.avg_non_z_1q >= 3.0);
    CHECK(stats.avg_non_z_1q <= 3.5);

    CounterRng rng(11, 0);
    for (int k = 0; k < 1000; ++k) {
        const auto& a = g[rng.uniform_index(g.size())];
        const auto& b = g[rng.uniform_index(g.size())];
        CHECK(g.contains(a.unitary * b.unitary));
    }
    Eigen::Matrix4cd t = Eigen::Matrix4cd::Identity();
    t(3, 3) = std::polar(1.0, 0.25 * 3.14159265358979);
    CHECK_FALSE(g.contains(t));
    CHECK_THROWS_AS(g.find(t), NumericalError);
}

TEST_CASE("counter RNG") {
    CounterRng a(5, 7), b(5, 7), c(5, 8);
    for (int k = 0; k < 100; ++k) {
        const auto x = a.next();
        CHECK(x == b.next());
        CHECK(x != c.next());
    }
    CounterRng u(1, 1);
    std::array<int, 6> hist{};
    for (int k = 0; k < 60000; ++k) hist[u.uniform_index(6)]++;
    for (int h : hist) CHECK(std::abs(h - 10000) < 500);
    CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
}

TEST_CASE("decay fit") {
    std::vector<double> m, y;
    for (int d : {1, 5, 10, 20, 50, 100, 200}) {
        m.push_back(d);
        y.push_back(0.75 * std::pow(0.99, d) + 0.25);
    }
    const auto f = fit_decay(m, y);
    CHECK(f.A == doctest::Approx(0.75).epsilon(1e-6));
    CHECK(f.p == doctest::Approx(0.99).epsilon(1e-6));
    CHECK(f.B == doctest::Approx(0.25).epsilon(1e-6));

    int within = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        std::vector<double> noisy = y;
        CounterRng rng(seed, 0);
        for (double& v : noisy) {
            const double u1 = 1.0 - rng.uniform01(), u2 = rng.uniform01();
            v += 0.01 * std::sqrt(-2 * std::log(u1)) * std::cos(2 * 3.141592653589793 * u2);
        }
        const auto nf = fit_decay(m, noisy);
        if (std::abs(nf.p - 0.99) <= 3 * nf.p_err) ++within;
    }
    CHECK(within >= 45);

    const auto flat = fit_decay(m, std::vector<double>(m.size(), 1.0));
    CHECK(flat.p == 1.0);
    CHECK_FALSE(flat.covariance_ok);
    CHECK_THROWS_AS(fit_decay({1, 2}, {0.9, 0.8}), ConfigError);
}

TEST_CASE("EPC and EPG arithmetic") {
    CHECK(epc_from_p(1.0) == 0.0);
    CHECK(epc_from_p(0.996) == doctest::Approx(0.003));
    CHECK(epg_bound(0.0029, 1.5) == doctest::Approx(0.00193).epsilon(2e-3));
    CHECK(epg_bound(0.0039, 1.5) == doctest::Approx(0.0026));
    CHECK(0.0019 <= epg_bound(0.0039, 1.5));
    CHECK_THROWS_AS(epc_from_p(1.5), DomainError);
}

TEST_CASE("readout correction") {
    Eigen::Matrix4d conf;
    conf << 0.95, 0.03, 0.02, 0.01,
            0.02, 0.94, 0.01, 0.03,
            0.02, 0.01, 0.93, 0.04,
            0.01, 0.02, 0.04, 0.92;
    const Eigen::Vector4d truth(0.4, 0.3, 0.2, 0.1);
    const auto r = readout_correction(conf * truth, conf);
    CHECK((r.corrected - truth).cwiseAbs().maxCoeff() < 1e-10);
    const auto same = readout_correction(truth, Eigen::Matrix4d::Identity());
    CHECK((same.corrected - truth).cwiseAbs().maxCoeff() < 1e-15);

    Eigen::Vector4d raw(0.99, 0.01, 0.0, 0.0);
    raw(0) += 0.01;
    raw /= raw.sum();
    const auto clipped = readout_correction(raw, conf);
    CHECK(clipped.corrected.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(clipped.corrected.minCoeff() >= 0.0);
    CHECK(clipped.residual > 0.0);
    CHECK_THROWS_AS(readout_correction(raw, Eigen::Matrix4d::Constant(0.25)), CorrectionError);
    CHECK_THROWS_AS(readout_correction(raw, Eigen::Matrix4d::Zero()), ConfigError);
}

TEST_CASE("randomized benchmarking") {
    RBConfig cfg;
    cfg.depths = {1, 10, 50, 100, 300};
    cfg.sequences_per_depth = 10;
    cfg.seed = 3;
    const auto ideal = simulate_rb(NoiseModel::ideal(), cfg);
    for (double s : ideal.survival) CHECK(std::abs(s - 1.0) < 1e-10);
    const auto ideal_irb = simulate_irb(NoiseModel::ideal(), cfg);
    CHECK(std::abs(ideal_irb.epg) < 1e-9 + 3 * ideal_irb.epg_err);

    cfg.depths = {1, 10, 25, 50, 100, 200, 300};
    cfg.sequences_per_depth = 30;
    const double eps = 0.002;
    const auto dep = simulate_rb(NoiseModel::depolarizing(eps), cfg);
    CHECK(dep.epc == doctest::Approx(1.5 * eps).epsilon(0.1));
    const double p_closed = clifford_depolarizing_parameter(1.0 - 4.0 * eps / 3.0);
    CHECK(dep.fit.p == doctest::Approx(p_closed).epsilon(0.01));

    RBConfig threaded = cfg;
    threaded.threads = 4;
    const auto dep4 = simulate_rb(NoiseModel::depolarizing(eps), threaded);
    CHECK(dep4.survival == dep.survival);
    CHECK(dep4.fit.p == dep.fit.p);

    const auto irb = simulate_irb(NoiseModel::depolarizing(0.0015), cfg);
    CHECK(irb.epg == doctest::Approx(0.0015).epsilon(0.1));
    CHECK(irb.epg <= irb.reference.epg_bound + 3 * irb.epg_err);

    // Recovery element closes every ideal sequence.
    CounterRng rng(9, 0);
    std::vector<std::size_t> seq;
    for (int k = 0; k < 40; ++k) seq.push_back(rng.uniform_index(11520));
    CHECK(sequence_survival(NoiseModel::ideal(), seq, true, cfg) == doctest::Approx(1.0).epsilon(1e-10));

    CHECK_THROWS_AS(noise_kind_from_string("amplitude-damping"), ConfigError);
    RBConfig empty = cfg;
    empty.depths.clear();
    CHECK_THROWS_AS(simulate_rb(NoiseModel::ideal(), empty), ConfigError);
}

TEST_CASE("custom Kraus noise from a calibrated gate") {
    PulseParams p = presets::pair1_pulse();
    p.half_length_ns = 23.0;  // 46 ns total
    CalibrationOptions opt;
    opt.threads = 4;
    const auto cal = calibrate_cz(presets::pair1_like(), p, {}, opt);
    const NoiseModel noise = NoiseModel::from_gate_report(cal.report);
    RBConfig cfg;
    cfg.depths = {1, 100, 400, 800};
    cfg.sequences_per_depth = 30;
    cfg.threads = 4;
    const auto r = simulate_rb(noise, cfg);
    CHECK(r.survival.back() > r.fit.B + 2 * r.survival_sem.back());
    CHECK(r.survival.front() > r.survival.back());
}
