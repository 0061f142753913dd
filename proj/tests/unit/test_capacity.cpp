#include "ccsc/capacity.hpp"
#include "ccsc/error.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ccsc;

namespace {

// Frozen reference values from tests/oracles/bpsk_oracle.py (1-D LLR form,
// scipy adaptive quadrature and a 1e7-sample numpy Monte-Carlo run).
constexpr double bpsk_mi_snr1_mc = 0.7216462863;
constexpr double bpsk_mi_snr1_mc_stderr = 2.306e-4;
constexpr double bpsk_h_snr1_mc = 3.8158374567;
constexpr double bpsk_sigma5_grid_peak_db = 1.85;
constexpr double bpsk_sigma5_grid_peak_bits = 0.5098350502;

struct QuadRef {
    double snr;
    double bits;
};
constexpr QuadRef bpsk_quad_refs[] = {
    {0.5, 0.485944154133}, {1.0, 0.721451590790}, {1.53485721, 0.851453636070}, {3.0, 0.971509793252},
    {10.0, 0.999983328240}};

const double log2_pi_e = std::log2(std::numbers::pi * std::numbers::e);

std::vector<Constellation> standard_set() { return {make_bpsk(), make_qam(4), make_psk(8), make_qam(16)}; }

Constellation transformed(const Constellation& c, auto&& map) {
    std::vector<cplx> pts;
    for (auto z : c.points()) pts.push_back(map(z));
    return from_points(pts, c.name());
}

} // namespace

TEST_CASE("normalize_channel") {
    const auto a = normalize_channel(10, 1, 5);
    CHECK(a.snr() == 10);
    CHECK(a.sigma_sq() == 5);
    const auto b = normalize_channel(0, 1, 2);
    CHECK(b.snr() == 0);
    CHECK(b.sigma_sq() == 2);
    const auto c = normalize_channel(4, 2, 6);
    CHECK(c.snr() == 2);
    CHECK(c.sigma_sq() == 3);

    auto code = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return Errc::io;
    };
    CHECK(code([] { normalize_channel(1, 2, 1); }) == Errc::not_less_noisy);
    CHECK(code([] { normalize_channel(1, 0, 1); }) == Errc::invalid_noise);
    CHECK(code([] { normalize_channel(1, -1, 1); }) == Errc::invalid_noise);
    CHECK(code([] { WiretapChannel(1.0, 0.5); }) == Errc::not_less_noisy);
    CHECK(code([] { WiretapChannel(-1.0, 2.0); }) == Errc::invalid_argument);
    CHECK_NOTHROW(WiretapChannel(3.0, 1.0));
}

TEST_CASE("conditional density") {
    const cplx x{0.6, -0.8};
    const double snr = 2.0;
    const cplx mean = std::sqrt(snr) * x;
    CHECK(conditional_density(mean, x, snr, 1.0) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-15));
    CHECK(conditional_density(mean, x, snr, 3.0) == doctest::Approx(1.0 / (3.0 * std::numbers::pi)).epsilon(1e-15));
    CHECK(conditional_density(mean + cplx{0.6, 0.8}, x, snr, 1.0) ==
          doctest::Approx(1.0 / (std::numbers::pi * std::numbers::e)).epsilon(1e-14));

    // Integrates to one: importance-weight against a wider CN(0, 4). The
    // ratio is not polynomial, so this needs more nodes than the default.
    const auto rule = gauss_hermite(96);
    for (double var : {1.0, 2.0}) {
        const double proposal_var = 4.0;
        const double total = expect_complex_gaussian(
            [&](cplx y) {
                const double q = std::exp(-std::norm(y) / proposal_var) / (std::numbers::pi * proposal_var);
                return conditional_density(y, cplx{0.3, 0.1}, 1.0, var) / q;
            },
            proposal_var, rule);
        CHECK(std::abs(total - 1.0) < 1e-10);
    }
}

TEST_CASE("logsumexp") {
    const double two[] = {0.0, 0.0};
    CHECK(logsumexp(two) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    const double deep[] = {-1000.0, -1000.0};
    CHECK(logsumexp(deep) == doctest::Approx(-1000.0 + std::log(2.0)).epsilon(1e-15));
    const double one[] = {5.0};
    CHECK(logsumexp(one) == 5.0);
    const double big[] = {1000.0, 999.0};
    CHECK(logsumexp(big) == doctest::Approx(1000.0 + std::log1p(std::exp(-1.0))).epsilon(1e-15));
    const double with_ninf[] = {-INFINITY, 1.0};
    CHECK(logsumexp(with_ninf) == 1.0);
    const double all_ninf[] = {-INFINITY, -INFINITY};
    CHECK(logsumexp(all_ninf) == -INFINITY);

    CHECK_THROWS_AS(logsumexp(std::span<const double>{}), Error);
    const double bad[] = {NAN, 0.0};
    CHECK_THROWS_AS(logsumexp(bad), Error);
    const double pinf[] = {INFINITY};
    CHECK_THROWS_AS(logsumexp(pinf), Error);
}

TEST_CASE("output entropy") {
    const auto rule = gauss_hermite(32);
    for (const auto& c : standard_set()) CHECK(std::abs(cc_output_entropy(c, 0.0, 1.0, rule) - log2_pi_e) < 1e-6);
    CHECK(std::abs(cc_output_entropy(make_bpsk(), 1e6, 1.0, rule) - (1.0 + log2_pi_e)) < 1e-3);
    CHECK(std::abs(cc_output_entropy(make_bpsk(), 1.0, 1.0, rule) - bpsk_h_snr1_mc) <= 4 * bpsk_mi_snr1_mc_stderr);
}

TEST_CASE("mutual information reference values") {
    const auto rule = gauss_hermite(32);
    for (const auto& c : standard_set()) {
        const auto e = cc_mutual_information(c, 0.0, 1.0, rule);
        CHECK(std::abs(e.bits) < 1e-9);
        CHECK(e.method.kind == Method::Kind::quadrature);
        CHECK(e.method.order == 32);
    }
    const double eps = 1.0 - cc_mutual_information(make_bpsk(), 1e3, 1.0, rule).bits;
    CHECK(eps >= 0.0);
    CHECK(eps < 1e-3);

    const double v1 = cc_mutual_information(make_bpsk(), 1.0, 1.0, rule).bits;
    CHECK(std::abs(v1 - bpsk_mi_snr1_mc) <= std::max(1e-4, 4 * bpsk_mi_snr1_mc_stderr));
    CHECK(std::abs(cc_mutual_information(make_qam(16), 1e6, 1.0, rule).bits - 4.0) < 1e-2);

    for (const auto& ref : bpsk_quad_refs) {
        CAPTURE(ref.snr);
        CHECK(std::abs(cc_mutual_information(make_bpsk(), ref.snr, 1.0, rule).bits - ref.bits) < 1e-7);
    }
}

TEST_CASE("secrecy capacity nulls and oracle peak value") {
    const auto rule = gauss_hermite(32);
    for (const auto& c : standard_set()) {
        for (double s2 : {1.5, 5.0, 20.0}) CHECK(cc_secrecy_capacity(c, WiretapChannel(0.0, s2), rule).bits < 1e-9);
        for (double snr : {0.01, 1.0, 30.0, 1e4}) CHECK(cc_secrecy_capacity(c, WiretapChannel(snr, 1.0), rule).bits < 1e-9);
    }
    const double at_peak =
        cc_secrecy_capacity(make_bpsk(), WiretapChannel(db_to_linear(bpsk_sigma5_grid_peak_db), 5.0), rule).bits;
    CHECK(std::abs(at_peak - bpsk_sigma5_grid_peak_bits) < 1e-4);
}

TEST_CASE("Gaussian baselines") {
    CHECK(gaussian_channel_capacity(0.0) == 0.0);
    CHECK(gaussian_channel_capacity(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gaussian_channel_capacity(3.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(gaussian_secrecy_capacity(WiretapChannel(1.0, 2.0)) ==
          doctest::Approx(1.0 - std::log2(1.5)).epsilon(1e-14));
    CHECK(gaussian_secrecy_capacity(WiretapChannel(1.0, 2.0)) == doctest::Approx(0.415037).epsilon(1e-6));
    CHECK(gaussian_secrecy_capacity(WiretapChannel(0.0, 7.0)) == 0.0);
    CHECK(std::abs(gaussian_secrecy_capacity(WiretapChannel(1e6, 4.0)) - 2.0) < 1e-4);

    for (double s2 : {1.0, 1.01, 2.0, 5.0, 20.0, 1000.0}) {
        double prev = 0.0;
        for (double db = -40; db <= 80; db += 0.25) {
            const double v = gaussian_secrecy_capacity(WiretapChannel(db_to_linear(db), s2));
            CHECK(v >= prev);
            CHECK(v <= std::log2(s2) + 1e-15);
            prev = v;
        }
    }
}

TEST_CASE("property: scaling identity I(snr, s2) == I(snr/s2, 1)") {
    const auto rule = gauss_hermite(32);
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> db(-20.0, 40.0), s2(1.0, 50.0);
    const auto cs = standard_set();
    for (int trial = 0; trial < 60; ++trial) {
        const auto& c = cs[static_cast<std::size_t>(trial) % cs.size()];
        const double snr = db_to_linear(db(rng)), var = s2(rng);
        const double direct = cc_mutual_information(c, snr, var, rule).bits;
        const double scaled = cc_mutual_information(c, snr / var, 1.0, rule).bits;
        CHECK(std::abs(direct - scaled) < 1e-9);
    }
}

TEST_CASE("property: bounds, monotonicity and entropy decomposition") {
    const auto rule = gauss_hermite(32);
    for (const auto& c : standard_set()) {
        const double cap = std::log2(static_cast<double>(c.size()));
        for (double var : {1.0, 5.0, 20.0}) {
            double prev = -1.0;
            for (double db = -30; db <= 50; db += 1.0) {
                CAPTURE(c.name());
                CAPTURE(db);
                const double snr = db_to_linear(db);
                const auto e = cc_mutual_information(c, snr, var, rule);
                CHECK(e.bits >= 0.0);
                CHECK(e.bits <= cap + 1e-9);
                CHECK(e.bits >= prev - 1e-8);
                prev = e.bits;
                if (e.bits > 0.0 && e.bits < cap) {
                    const double h = cc_output_entropy(c, snr, var, rule);
                    CHECK(std::abs(e.bits - (h - std::log2(std::numbers::pi * std::numbers::e * var))) < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("property: secrecy rate stays below the Gaussian-input secrecy capacity") {
    const auto rule = gauss_hermite(32);
    for (const auto& c : standard_set()) {
        for (double s2 : {5.0, 10.0, 15.0, 20.0}) {
            for (double db = -30; db <= 50; db += 2.5) {
                const WiretapChannel ch(db_to_linear(db), s2);
                CHECK(cc_secrecy_capacity(c, ch, rule).bits <= gaussian_secrecy_capacity(ch) + 1e-6);
            }
        }
    }
}

TEST_CASE("endpoint behaviour at high SNR") {
    const auto rule = gauss_hermite(32);
    const auto b = make_bpsk();
    for (double s2 : {5.0, 10.0, 15.0, 20.0}) {
        CAPTURE(s2);
        const double v0 = cc_secrecy_capacity(b, WiretapChannel(db_to_linear(49.0), s2), rule).bits;
        const double v1 = cc_secrecy_capacity(b, WiretapChannel(db_to_linear(49.5), s2), rule).bits;
        const double v2 = cc_secrecy_capacity(b, WiretapChannel(db_to_linear(50.0), s2), rule).bits;
        CHECK(v2 < 0.05);
        // Both informations saturate at log2 M in double precision by 50 dB,
        // so "decreasing" can only be observed as non-increasing.
        CHECK(v1 <= v0 + 1e-12);
        CHECK(v2 <= v1 + 1e-12);
    }
    // Where the rates are still resolvable the decrease is strict.
    double prev = INFINITY;
    for (double db : {10.0, 12.0, 14.0, 16.0}) {
        const double v = cc_secrecy_capacity(b, WiretapChannel(db_to_linear(db), 5.0), rule).bits;
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("property: rotation and conjugation invariance at order 32") {
    const auto rule = gauss_hermite(32);
    for (const auto& c : standard_set()) {
        const auto conj = transformed(c, [](cplx z) { return std::conj(z); });
        for (double theta : {0.1, 0.7, std::numbers::pi / 4, 2.0}) {
            const auto rot = transformed(c, [theta](cplx z) { return z * std::polar(1.0, theta); });
            for (double db = -10; db <= 30; db += 2.0) {
                CAPTURE(c.name());
                CAPTURE(theta);
                CAPTURE(db);
                const double snr = db_to_linear(db);
                const double base = cc_mutual_information(c, snr, 1.0, rule).bits;
                CHECK(std::abs(cc_mutual_information(rot, snr, 1.0, rule).bits - base) < 1e-6);
                CHECK(std::abs(cc_mutual_information(conj, snr, 1.0, rule).bits - base) < 1e-6);
            }
        }
    }
    for (double db = -10; db <= 30; db += 1.0) {
        const double snr = db_to_linear(db);
        CHECK(std::abs(cc_mutual_information(make_psk(4), snr, 1.0, rule).bits -
                       cc_mutual_information(make_qam(4), snr, 1.0, rule).bits) < 1e-6);
    }
}

TEST_CASE("convergence: order 24 vs order 48 up to 30 dB") {
    const auto r24 = gauss_hermite(24), r48 = gauss_hermite(48);
    for (const auto& c : {make_bpsk(), make_qam(4), make_qam(16)}) {
        double worst = 0.0;
        for (double db = -10; db <= 30; db += 0.5) {
            const double snr = db_to_linear(db);
            worst = std::max(worst, std::abs(cc_mutual_information(c, snr, 1.0, r24).bits -
                                             cc_mutual_information(c, snr, 1.0, r48).bits));
        }
        CAPTURE(c.name());
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("convergence: 8-PSK order 24 vs order 48" * doctest::may_fail()) {
    // Known shortfall: 8-PSK pair directions span every 22.5 degrees, so part
    // of its decision boundary always lies close to a grid axis. The gap
    // peaks near 6 dB at about 3e-6 bits; order 32 vs 96 stays below 1e-6.
    const auto r24 = gauss_hermite(24), r48 = gauss_hermite(48);
    const auto c = make_psk(8);
    double worst = 0.0;
    for (double db = -10; db <= 30; db += 0.5) {
        const double snr = db_to_linear(db);
        worst = std::max(worst, std::abs(cc_mutual_information(c, snr, 1.0, r24).bits -
                                         cc_mutual_information(c, snr, 1.0, r48).bits));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("default order is converged against order 96") {
    const auto r32 = gauss_hermite(32), r96 = gauss_hermite(96);
    for (const auto& c : standard_set()) {
        for (double db = -10; db <= 30; db += 1.0) {
            CAPTURE(c.name());
            CAPTURE(db);
            const double snr = db_to_linear(db);
            CHECK(std::abs(cc_mutual_information(c, snr, 1.0, r32).bits -
                           cc_mutual_information(c, snr, 1.0, r96).bits) < 1e-6);
        }
    }
}

TEST_CASE("audit and Monte-Carlo metadata") {
    const auto rule = gauss_hermite(32);
    const auto audited = cc_mutual_information(make_qam(16), 50.0, 1.0, rule, Audit::convergence);
    CHECK(audited.error_bound > 0.0);
    CHECK(audited.error_bound < 1e-5);
    CHECK(cc_mutual_information(make_qam(16), 50.0, 1.0, rule).error_bound == 0.0);

    const MCConfig cfg{200'000, 5};
    const auto mc = cc_mutual_information_mc(make_bpsk(), 1.0, 1.0, cfg);
    CHECK(mc.method.kind == Method::Kind::monte_carlo);
    CHECK(mc.method.samples == cfg.samples);
    CHECK(mc.method.seed == cfg.seed);
    CHECK(mc.error_bound > 0.0);
    CHECK(std::abs(mc.bits - bpsk_quad_refs[1].bits) <= 4 * mc.error_bound);
    const auto again = cc_mutual_information_mc(make_bpsk(), 1.0, 1.0, cfg);
    CHECK(again.bits == mc.bits);

    const auto sec = cc_secrecy_capacity_mc(make_bpsk(), WiretapChannel(2.0, 5.0), cfg);
    const auto sec_q = cc_secrecy_capacity(make_bpsk(), WiretapChannel(2.0, 5.0), rule);
    CHECK(std::abs(sec.bits - sec_q.bits) <= 4 * sec.error_bound);
}

TEST_CASE("secrecy equals difference of the two channel informations") {
    const auto rule = gauss_hermite(32);
    for (const auto& c : standard_set()) {
        const WiretapChannel ch(db_to_linear(7.0), 10.0);
        const double main = cc_mutual_information(c, ch.snr(), 1.0, rule).bits;
        const double eve = cc_mutual_information(c, ch.snr(), ch.sigma_sq(), rule).bits;
        CHECK(cc_secrecy_capacity(c, ch, rule).bits == doctest::Approx(main - eve).epsilon(1e-14));
    }
}
