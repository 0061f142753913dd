#include "ccsc/optimize.hpp"

#include "ccsc/capacity.hpp"
#include "ccsc/error.hpp"
#include "ccsc/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace ccsc {

namespace {

constexpr double noise_floor = 1e-12;
constexpr double tie_bits = 1e-9;

} // namespace

GoldenResult golden_section_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw Error(Errc::invalid_bracket, "need lo < hi");
    if (!(tol > 0.0)) throw Error(Errc::invalid_bracket, "tolerance must be positive");

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    GoldenResult best{fc >= fd ? c : d, std::max(fc, fd), 0};

    while (b - a > tol) {
        ++best.iterations;
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
            if (fc > best.fx) best.x = c, best.fx = fc;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
            if (fd > best.fx) best.x = d, best.fx = fd;
        }
    }
    return best;
}

void SearchOptions::validate() const {
    if (!(scan_lo_db < scan_hi_db)) throw Error(Errc::invalid_argument, "scan range must have lo < hi");
    if (!(scan_step_db > 0.0)) throw Error(Errc::invalid_argument, "scan step must be positive");
    if (!(tol_db > 0.0)) throw Error(Errc::invalid_argument, "tolerance must be positive");
    if (order < 2 || order > max_hermite_order)
        throw Error(Errc::invalid_order, "quadrature order must be in [2, 200]");
}

std::vector<double> db_grid(double lo_db, double hi_db, double step_db) {
    if (!(lo_db < hi_db) || !(step_db > 0.0))
        throw Error(Errc::invalid_argument, "grid needs start < stop and step > 0");
    const double span = (hi_db - lo_db) / step_db;
    auto count = static_cast<std::size_t>(std::floor(span + 1e-9));
    std::vector<double> grid;
    grid.reserve(count + 1);
    for (std::size_t k = 0; k <= count; ++k) grid.push_back(lo_db + static_cast<double>(k) * step_db);
    if (std::abs(grid.back() - hi_db) <= 1e-9 * std::max(1.0, step_db)) grid.back() = hi_db;
    return grid;
}

std::vector<std::size_t> strict_local_maxima(std::span<const double> values) {
    std::vector<std::size_t> peaks;
    for (std::size_t k = 1; k + 1 < values.size(); ++k) {
        if (values[k] > noise_floor && values[k] > values[k - 1] && values[k] > values[k + 1])
            peaks.push_back(k);
    }
    return peaks;
}

MaximumResult find_secrecy_maximum(const Constellation& c, double sigma_sq, const SearchOptions& opts) {
    if (!(sigma_sq > 1.0) || !std::isfinite(sigma_sq))
        throw Error(Errc::not_less_noisy, "search requires sigma^2 > 1, got " + std::to_string(sigma_sq));
    opts.validate();

    const HermiteRule rule = gauss_hermite(opts.order);
    auto secrecy_at_db = [&](double db) {
        return cc_secrecy_capacity(c, WiretapChannel(db_to_linear(db), sigma_sq), rule).bits;
    };

    const std::vector<double> grid = db_grid(opts.scan_lo_db, opts.scan_hi_db, opts.scan_step_db);
    std::vector<double> values(grid.size());
    parallel_for(grid.size(), [&](std::size_t k) { values[k] = secrecy_at_db(grid[k]); });

    if (std::all_of(values.begin(), values.end(), [](double v) { return v <= noise_floor; }))
        throw Error(Errc::no_interior_max, "secrecy rate vanishes on the whole scan");
    const std::vector<std::size_t> peaks = strict_local_maxima(values);
    if (peaks.empty())
        throw Error(Errc::no_interior_max, "no interior local maximum in the scan range; widen --scan-db");

    MaximumResult best;
    bool have = false;
    int iterations = 0;
    for (std::size_t k : peaks) {
        const double lo = grid[k - 1], hi = grid[k + 1];
        GoldenResult g = golden_section_max(secrecy_at_db, lo, hi, opts.tol_db);
        iterations += g.iterations;
        // Never return less than the grid point that seeded the refinement.
        if (g.fx < values[k]) g.x = grid[k], g.fx = values[k];

        const bool better = !have || g.fx > best.c_max + tie_bits ||
                            (std::abs(g.fx - best.c_max) <= tie_bits && g.x < best.snr_max_db);
        if (better) {
            have = true;
            best.snr_max_db = g.x;
            best.c_max = g.fx;
            best.bracket_lo_db = lo;
            best.bracket_hi_db = hi;
        }
    }

    best.sigma_sq = sigma_sq;
    best.snr_max_linear = db_to_linear(best.snr_max_db);
    best.grid_local_maxima = static_cast<int>(peaks.size());
    best.iterations = iterations;
    best.unimodal_ok = peaks.size() == 1;
    best.error_bound =
        cc_secrecy_capacity(c, WiretapChannel(best.snr_max_linear, sigma_sq), rule, Audit::convergence)
            .error_bound;
    best.c_scan_lo = values.front();
    best.c_scan_hi = values.back();
    return best;
}

std::vector<MaximumResult> sweep_max_vs_sigma(const Constellation& c, std::span<const double> sigma_list,
                                              const SearchOptions& opts) {
    if (sigma_list.empty()) throw Error(Errc::invalid_argument, "empty sigma^2 list");
    for (std::size_t k = 0; k < sigma_list.size(); ++k) {
        if (!(sigma_list[k] > 1.0))
            throw Error(Errc::not_less_noisy, "sigma^2 values must be > 1");
        if (k > 0 && !(sigma_list[k] > sigma_list[k - 1]))
            throw Error(Errc::invalid_argument, "sigma^2 list must be ascending");
    }
    // Sequential over sigma^2 so each scan can use every worker.
    std::vector<MaximumResult> rows;
    rows.reserve(sigma_list.size());
    for (double s : sigma_list) rows.push_back(find_secrecy_maximum(c, s, opts));
    return rows;
}

} // namespace ccsc
