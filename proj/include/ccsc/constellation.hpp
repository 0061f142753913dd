#ifndef CCSC_CONSTELLATION_HPP
#define CCSC_CONSTELLATION_HPP

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace ccsc {

using cplx = std::complex<double>;

/// Finite complex signal set with unit average energy.
///
/// Instances are only produced by the factory functions below, which
/// normalize the points and reject degenerate or duplicated inputs, so a
/// Constellation always satisfies: size >= 2, pairwise distinct points,
/// (1/M) sum |x|^2 == 1 to within 1e-12. Immutable after construction.
class Constellation {
public:
    const std::string& name() const noexcept { return name_; }
    std::span<const cplx> points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    const cplx& operator[](std::size_t i) const { return points_[i]; }

private:
    Constellation(std::string name, std::vector<cplx> points)
        : name_(std::move(name)), points_(std::move(points)) {}

    friend Constellation make_constellation(std::string name, std::vector<cplx> raw);

    std::string name_;
    std::vector<cplx> points_;
};

/// Antipodal {+1, -1}.
Constellation make_bpsk();

/// exp(i 2 pi k / M), k = 0..M-1, ordered by increasing angle.
/// Throws Errc::invalid_size when M < 2.
Constellation make_psk(int M);

/// Square QAM grid with odd-integer coordinates, scaled to unit energy and
/// ordered lexicographically by (real, imag). M must be an even square
/// (4, 16, 64, ...), otherwise Errc::unsupported_size.
Constellation make_qam(int M);

/// Normalizes arbitrary points to unit average energy. Point order is kept.
Constellation from_points(std::span<const cplx> raw, std::string name = "custom");

/// Named variant used by the factories.
Constellation make_constellation(std::string name, std::vector<cplx> raw);

double average_energy(const Constellation& c);
double min_distance(const Constellation& c);

} // namespace ccsc

#endif
