#ifndef CCSC_OPTIMIZE_HPP
#define CCSC_OPTIMIZE_HPP

#include "ccsc/constellation.hpp"
#include "ccsc/integrate.hpp"

#include <functional>
#include <span>
#include <vector>

namespace ccsc {

struct GoldenResult {
    double x = 0.0;
    double fx = 0.0;
    int iterations = 0;
};

/// Golden-section search for the maximum of f on [lo, hi]. Stops once the
/// bracket is narrower than tol and returns the best probe, which lies
/// within tol of the argmax whenever f is unimodal on [lo, hi].
/// Throws Errc::invalid_bracket unless lo < hi and tol > 0.
GoldenResult golden_section_max(const std::function<double(double)>& f, double lo, double hi, double tol);

struct SearchOptions {
    double scan_lo_db = -30.0;
    double scan_hi_db = 50.0;
    double scan_step_db = 0.5;
    double tol_db = 0.01;
    int order = default_hermite_order;

    void validate() const;
};

struct MaximumResult {
    double sigma_sq = 0.0;
    double snr_max_db = 0.0;
    double snr_max_linear = 0.0;
    double c_max = 0.0;
    double bracket_lo_db = 0.0;
    double bracket_hi_db = 0.0;
    int grid_local_maxima = 0;
    int iterations = 0;
    bool unimodal_ok = false;
    /// |C(order n) - C(order n/2)| at the located peak.
    double error_bound = 0.0;
    /// Secrecy rate at the first and last scan points.
    double c_scan_lo = 0.0;
    double c_scan_hi = 0.0;
};

/// Scan points scan_lo_db + k * step, with scan_hi_db included when it
/// falls within 1e-9 of a step multiple.
std::vector<double> db_grid(double lo_db, double hi_db, double step_db);

/// Interior indices k with v[k] strictly above both neighbours. Values at or
/// below the roundoff floor (1e-12) never count, so the saturated tail where
/// both mutual informations equal log2 M does not produce spurious peaks.
std::vector<std::size_t> strict_local_maxima(std::span<const double> values);

/// Locates the SNR (on the dB axis) maximizing the secrecy rate for the
/// given eavesdropper noise ratio. Every strict local maximum of the coarse
/// scan is refined by golden section between its grid neighbours; the best
/// refined point wins, with ties within 1e-9 bits going to the lower SNR.
/// Throws Errc::not_less_noisy for sigma_sq <= 1 and Errc::no_interior_max
/// when the scan is identically zero or has no interior peak.
MaximumResult find_secrecy_maximum(const Constellation& c, double sigma_sq, const SearchOptions& opts = {});

/// One MaximumResult per sigma_sq, in input order. sigma_list must be
/// non-empty, strictly ascending and > 1.
std::vector<MaximumResult> sweep_max_vs_sigma(const Constellation& c, std::span<const double> sigma_list,
                                              const SearchOptions& opts = {});

} // namespace ccsc

#endif
