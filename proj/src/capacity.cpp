#include "ccsc/capacity.hpp"

#include "ccsc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace ccsc {

namespace {

constexpr double clamp_slack = 1e-9;

void check_snr(double snr) {
    if (!(snr >= 0.0) || !std::isfinite(snr))
        throw Error(Errc::invalid_argument, "snr must be finite and >= 0");
}

void check_variance(double variance) {
    if (!(variance > 0.0) || !std::isfinite(variance))
        throw Error(Errc::invalid_argument, "noise variance must be positive and finite");
}

// Integrand of the output-entropy expectation, in nats:
//   g(N) = (1/M) sum_i log sum_j exp(-|N + sqrt(snr)(x_i - x_j)|^2 / variance).
class MixtureLogTerm {
public:
    MixtureLogTerm(const Constellation& c, double snr, double variance)
        : m_(c.size()), inv_var_(1.0 / variance), offsets_(m_ * m_) {
        const double amp = std::sqrt(snr);
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t j = 0; j < m_; ++j) offsets_[i * m_ + j] = amp * (c[i] - c[j]);
    }

    double operator()(cplx noise) const {
        thread_local std::vector<double> scratch;
        scratch.resize(m_);
        double acc = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            const cplx* row = offsets_.data() + i * m_;
            for (std::size_t j = 0; j < m_; ++j) scratch[j] = -std::norm(noise + row[j]) * inv_var_;
            acc += logsumexp(scratch);
        }
        return acc / static_cast<double>(m_);
    }

private:
    std::size_t m_;
    double inv_var_;
    std::vector<cplx> offsets_;
};

// h = log2 M + log2(pi variance) - E[g] / ln 2
// Angular clearance of a difference direction from the grid, in degrees:
// distance to the nearest axis, or twice the distance to the nearest
// diagonal (axis alignment costs roughly twice as much accuracy).
double clearance_deg(double direction_deg) {
    double psi = std::fmod(direction_deg, 90.0);
    if (psi < 0.0) psi += 90.0;
    const double to_axis = std::min(psi, 90.0 - psi);
    const double to_diagonal = std::abs(psi - 45.0);
    return std::min(to_axis, 2.0 * to_diagonal);
}

double entropy_from_log_term(std::size_t m, double variance, double expected_nats) {
    return std::log2(static_cast<double>(m)) + std::log2(std::numbers::pi * variance) -
           expected_nats * std::numbers::log2e;
}

double conditional_entropy(double variance) {
    return std::log2(std::numbers::pi * std::numbers::e * variance);
}

// Clamps roundoff excursions outside [lo, hi]; anything beyond the slack is a
// genuine numerical failure.
void clamp_bits(MIEstimate& est, double lo, double hi, const char* what) {
    est.unclamped = est.bits;
    double excess = 0.0;
    if (est.bits < lo) excess = lo - est.bits;
    if (est.bits > hi) excess = est.bits - hi;
    if (excess == 0.0) return;
    if (excess > clamp_slack) {
        throw Error(Errc::numerical_domain, std::string(what) + " value " + std::to_string(est.bits) +
                                                " outside [" + std::to_string(lo) + ", " +
                                                std::to_string(hi) + "]");
    }
    est.bits = std::clamp(est.bits, lo, hi);
    est.error_bound = std::max(est.error_bound, excess);
}

double raw_mi_quadrature(const Constellation& c, double snr, double variance, const HermiteRule& rule) {
    return cc_output_entropy(c, snr, variance, rule) - conditional_entropy(variance);
}

} // namespace

WiretapChannel::WiretapChannel(double snr, double sigma_sq) : snr_(snr), sigma_sq_(sigma_sq) {
    check_snr(snr);
    if (!std::isfinite(sigma_sq) || !(sigma_sq >= 1.0)) {
        throw Error(Errc::not_less_noisy,
                    "eavesdropper noise ratio sigma^2 must be >= 1, got " + std::to_string(sigma_sq));
    }
}

WiretapChannel normalize_channel(double P0, double sigma1_sq, double sigma2_sq) {
    if (!(sigma1_sq > 0.0) || !std::isfinite(sigma1_sq))
        throw Error(Errc::invalid_noise, "main-channel noise variance must be positive");
    if (!(P0 >= 0.0) || !std::isfinite(P0)) throw Error(Errc::invalid_argument, "power must be >= 0");
    if (!(sigma2_sq >= sigma1_sq)) {
        throw Error(Errc::not_less_noisy, "eavesdropper noise variance " + std::to_string(sigma2_sq) +
                                              " below main-channel variance " + std::to_string(sigma1_sq));
    }
    return WiretapChannel(P0 / sigma1_sq, sigma2_sq / sigma1_sq);
}

double conditional_density(cplx y, cplx x, double snr, double variance) {
    check_variance(variance);
    return std::exp(-std::norm(y - std::sqrt(snr) * x) / variance) / (std::numbers::pi * variance);
}

double logsumexp(std::span<const double> values) {
    if (values.empty()) throw Error(Errc::invalid_argument, "logsumexp of an empty list");
    double top = -std::numeric_limits<double>::infinity();
    for (double v : values) {
        if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
            throw Error(Errc::invalid_argument, "logsumexp input must not be NaN or +inf");
        top = std::max(top, v);
    }
    if (top == -std::numeric_limits<double>::infinity()) return top;
    double sum = 0.0;
    for (double v : values) sum += std::exp(v - top);
    return top + std::log(sum);
}

double quadrature_frame(const Constellation& c) {
    constexpr double shell = 1.2;
    constexpr int steps = 360; // 0.25 degree candidates over a quarter turn
    const double dmin = min_distance(c);
    std::vector<double> directions;
    for (std::size_t i = 0; i < c.size(); ++i) {
        for (std::size_t j = i + 1; j < c.size(); ++j) {
            const cplx d = c[j] - c[i];
            if (std::abs(d) <= shell * dmin) directions.push_back(std::arg(d) * 180.0 / std::numbers::pi);
        }
    }
    int best_k = 0;
    double best_score = -1.0;
    for (int k = 0; k < steps; ++k) {
        const double theta = 90.0 * k / steps;
        double score = std::numeric_limits<double>::infinity();
        for (double phi : directions) score = std::min(score, clearance_deg(phi - theta));
        if (score > best_score + 1e-12) best_score = score, best_k = k;
    }
    return (90.0 * best_k / steps) * std::numbers::pi / 180.0;
}

double cc_output_entropy(const Constellation& c, double snr, double variance, const HermiteRule& rule) {
    check_snr(snr);
    check_variance(variance);
    const MixtureLogTerm g(c, snr, variance);
    const double expected = expect_complex_gaussian(g, variance, rule, quadrature_frame(c));
    return entropy_from_log_term(c.size(), variance, expected);
}

MIEstimate cc_mutual_information(const Constellation& c, double snr, double variance,
                                 const HermiteRule& rule, Audit audit) {
    MIEstimate est;
    est.method = {Method::Kind::quadrature, rule.order, 0, 0};
    est.bits = raw_mi_quadrature(c, snr, variance, rule);
    if (audit == Audit::convergence && rule.order >= 2) {
        const double coarse = raw_mi_quadrature(c, snr, variance, gauss_hermite(rule.order / 2));
        est.error_bound = std::abs(est.bits - coarse);
    }
    clamp_bits(est, 0.0, std::log2(static_cast<double>(c.size())), "mutual information");
    return est;
}

MIEstimate cc_mutual_information_mc(const Constellation& c, double snr, double variance,
                                    const MCConfig& cfg) {
    check_snr(snr);
    check_variance(variance);
    const MixtureLogTerm g(c, snr, variance);
    const MCResult r = mc_expect_complex_gaussian(std::cref(g), variance, cfg);

    MIEstimate est;
    est.method = {Method::Kind::monte_carlo, 0, cfg.samples, cfg.seed};
    est.bits = entropy_from_log_term(c.size(), variance, r.mean) - conditional_entropy(variance);
    est.error_bound = r.std_error * std::numbers::log2e;
    // MC noise can legitimately push the estimate slightly out of range near
    // the endpoints; report it unclamped rather than failing.
    est.unclamped = est.bits;
    return est;
}

MIEstimate cc_secrecy_capacity(const Constellation& c, const WiretapChannel& ch, const HermiteRule& rule,
                               Audit audit) {
    const MIEstimate main = cc_mutual_information(c, ch.snr(), 1.0, rule);
    const MIEstimate eve = cc_mutual_information(c, ch.snr(), ch.sigma_sq(), rule);

    MIEstimate est;
    est.method = main.method;
    est.bits = main.bits - eve.bits;
    est.error_bound = std::max(main.error_bound, eve.error_bound);
    if (audit == Audit::convergence && rule.order >= 2) {
        const HermiteRule coarse = gauss_hermite(rule.order / 2);
        const double coarse_bits = raw_mi_quadrature(c, ch.snr(), 1.0, coarse) -
                                   raw_mi_quadrature(c, ch.snr(), ch.sigma_sq(), coarse);
        est.error_bound = std::max(est.error_bound, std::abs(est.bits - coarse_bits));
    }
    clamp_bits(est, 0.0, std::numeric_limits<double>::infinity(), "secrecy capacity");
    return est;
}

MIEstimate cc_secrecy_capacity_mc(const Constellation& c, const WiretapChannel& ch, const MCConfig& cfg) {
    const MIEstimate main = cc_mutual_information_mc(c, ch.snr(), 1.0, cfg);
    const MIEstimate eve = cc_mutual_information_mc(c, ch.snr(), ch.sigma_sq(), cfg);
    MIEstimate est;
    est.method = main.method;
    est.unclamped = main.bits - eve.bits;
    est.bits = std::max(0.0, est.unclamped);
    est.error_bound = std::hypot(main.error_bound, eve.error_bound);
    return est;
}

double gaussian_channel_capacity(double snr) {
    check_snr(snr);
    return std::log1p(snr) * std::numbers::log2e;
}

double gaussian_secrecy_capacity(const WiretapChannel& ch) {
    if (ch.snr() == 0.0 || ch.sigma_sq() == 1.0) return 0.0;
    // log2 sigma^2 - log2(1 + (sigma^2 - 1)/(1 + snr)): monotone in snr
    // under rounding, unlike a difference of two log1p terms.
    const double gap = (ch.sigma_sq() - 1.0) / (1.0 + ch.snr());
    return std::max(0.0, std::log2(ch.sigma_sq()) - std::log1p(gap) * std::numbers::log2e);
}

} // namespace ccsc
