#include "ccsc/constellation.hpp"

#include "ccsc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ccsc {

namespace {

constexpr double proximity_guard = 1e-12;

double mean_energy(std::span<const cplx> pts) {
    double s = 0.0;
    for (const auto& z : pts) s += std::norm(z);
    return s / static_cast<double>(pts.size());
}

} // namespace

Constellation make_constellation(std::string name, std::vector<cplx> raw) {
    if (raw.size() < 2) {
        throw Error(Errc::invalid_size, "constellation needs at least 2 points, got " +
                                            std::to_string(raw.size()));
    }
    for (const auto& z : raw) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw Error(Errc::degenerate, "non-finite constellation point");
    }
    const double energy = mean_energy(raw);
    if (!(energy > 0.0)) throw Error(Errc::degenerate, "zero total energy");

    const double scale = 1.0 / std::sqrt(energy);
    for (auto& z : raw) z *= scale;

    for (std::size_t i = 0; i < raw.size(); ++i) {
        for (std::size_t j = i + 1; j < raw.size(); ++j) {
            if (raw[i] == raw[j] || std::abs(raw[i] - raw[j]) <= proximity_guard) {
                throw Error(Errc::duplicate_point, "points " + std::to_string(i) + " and " +
                                                       std::to_string(j) + " coincide");
            }
        }
    }
    return Constellation(std::move(name), std::move(raw));
}

Constellation make_bpsk() { return make_constellation("bpsk", {cplx{1.0, 0.0}, cplx{-1.0, 0.0}}); }

Constellation make_psk(int M) {
    if (M < 2) throw Error(Errc::invalid_size, "PSK order must be >= 2, got " + std::to_string(M));
    std::vector<cplx> pts;
    pts.reserve(static_cast<std::size_t>(M));
    for (int k = 0; k < M; ++k) {
        // Exact values on the axes so that e.g. psk4 is {1, i, -1, -i}.
        if ((4 * k) % M == 0) {
            static constexpr cplx axis[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
            pts.push_back(axis[(4 * k / M) % 4]);
            continue;
        }
        const double theta = 2.0 * std::numbers::pi * k / M;
        pts.emplace_back(std::cos(theta), std::sin(theta));
    }
    return make_constellation("psk" + std::to_string(M), std::move(pts));
}

Constellation make_qam(int M) {
    const int side = M > 0 ? static_cast<int>(std::lround(std::sqrt(static_cast<double>(M)))) : 0;
    if (M < 4 || side * side != M || side % 2 != 0) {
        throw Error(Errc::unsupported_size,
                    "QAM order must be an even-sided square (4, 16, 64, ...), got " + std::to_string(M));
    }
    std::vector<cplx> pts;
    pts.reserve(static_cast<std::size_t>(M));
    for (int a = 0; a < side; ++a) {
        for (int b = 0; b < side; ++b) {
            pts.emplace_back(2.0 * a - (side - 1), 2.0 * b - (side - 1));
        }
    }
    return make_constellation("qam" + std::to_string(M), std::move(pts));
}

Constellation from_points(std::span<const cplx> raw, std::string name) {
    return make_constellation(std::move(name), std::vector<cplx>(raw.begin(), raw.end()));
}

double average_energy(const Constellation& c) { return mean_energy(c.points()); }

double min_distance(const Constellation& c) {
    auto pts = c.points();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::min(best, std::abs(pts[i] - pts[j]));
    return best;
}

} // namespace ccsc
