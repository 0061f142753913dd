#ifndef CCSC_CAPACITY_HPP
#define CCSC_CAPACITY_HPP

#include "ccsc/constellation.hpp"
#include "ccsc/integrate.hpp"

#include <cstdint>
#include <span>

namespace ccsc {

/// Normalized Gaussian wiretap channel: main-channel noise has unit
/// variance, the eavesdropper sees variance sigma_sq = sigma2^2 / sigma1^2.
/// snr is linear (P0 / sigma1^2).
class WiretapChannel {
public:
    /// Throws Errc::invalid_argument for negative/non-finite snr and
    /// Errc::not_less_noisy for sigma_sq < 1. sigma_sq == 1 is accepted.
    WiretapChannel(double snr, double sigma_sq);

    double snr() const noexcept { return snr_; }
    double sigma_sq() const noexcept { return sigma_sq_; }

private:
    double snr_;
    double sigma_sq_;
};

WiretapChannel normalize_channel(double P0, double sigma1_sq, double sigma2_sq);

struct Method {
    enum class Kind { quadrature, monte_carlo };
    Kind kind = Kind::quadrature;
    int order = default_hermite_order;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

/// Mutual information (or secrecy rate) in bits per channel use.
/// error_bound: quadrature convergence gap |I(n) - I(n/2)| when audited,
/// the standard error for Monte-Carlo, and at least the magnitude of any
/// roundoff clamp applied to bits.
struct MIEstimate {
    double bits = 0.0;
    Method method;
    double error_bound = 0.0;
    double unclamped = 0.0;
};

enum class Audit { none, convergence };

double conditional_density(cplx y, cplx x, double snr, double variance);

/// log(sum exp(v)) with max-shift; accepts -inf entries.
double logsumexp(std::span<const double> values);

/// Orientation (radians) of the quadrature grid used for constellation c.
/// Chosen so that nearest-neighbour difference directions sit away from
/// the grid axes and diagonals: the log-sum-exp integrand has near-real
/// singularities along the decision boundaries, and Gauss-Hermite converges
/// slowly when those line up with a grid axis.
double quadrature_frame(const Constellation& c);

/// h(output) in bits for uniform input over c and noise CN(0, variance).
double cc_output_entropy(const Constellation& c, double snr, double variance, const HermiteRule& rule);

/// I(X; sqrt(snr) X + N), N ~ CN(0, variance), uniform X over c.
/// Results within 1e-9 outside [0, log2 M] are clamped; larger excursions
/// raise Errc::numerical_domain.
MIEstimate cc_mutual_information(const Constellation& c, double snr, double variance,
                                 const HermiteRule& rule, Audit audit = Audit::none);

/// Monte-Carlo counterpart; error_bound is the standard error.
MIEstimate cc_mutual_information_mc(const Constellation& c, double snr, double variance,
                                    const MCConfig& cfg);

/// I(X;Y) - I(X;Z), clamped at 0 from below.
MIEstimate cc_secrecy_capacity(const Constellation& c, const WiretapChannel& ch,
                               const HermiteRule& rule, Audit audit = Audit::none);

MIEstimate cc_secrecy_capacity_mc(const Constellation& c, const WiretapChannel& ch,
                                  const MCConfig& cfg);

/// log2(1 + snr).
double gaussian_channel_capacity(double snr);

/// log2(1 + snr) - log2(1 + snr / sigma_sq).
double gaussian_secrecy_capacity(const WiretapChannel& ch);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

} // namespace ccsc

#endif
