#include "ccsc/integrate.hpp"

#include "ccsc/parallel.hpp"

#include <algorithm>

#include <Eigen/Eigenvalues>
#include <limits>

namespace ccsc {

HermiteRule gauss_hermite(int n) {
    if (n < 1 || n > max_hermite_order) {
        throw Error(Errc::invalid_order, "Gauss-Hermite order must be in [1, " +
                                             std::to_string(max_hermite_order) + "], got " +
                                             std::to_string(n));
    }
    using real = long double;
    const real pim4 = 0.7511255444649424828587030047762276930510L; // pi^(-1/4)
    const real eps = 4 * std::numeric_limits<real>::epsilon();
    const int half = (n + 1) / 2;

    // Golub-Welsch: roots of H_n are the eigenvalues of the Jacobi matrix
    // with off-diagonal sqrt(k/2). They seed a Newton polish on the
    // orthonormal recurrence, whose derivative also yields weights with full
    // relative accuracy in the far tail.
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd off(std::max(n - 1, 0));
    for (int k = 1; k < n; ++k) off(k - 1) = std::sqrt(k / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> jacobi;
    jacobi.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& guess = jacobi.eigenvalues(); // ascending

    std::vector<real> roots(static_cast<std::size_t>(half));
    std::vector<real> wts(static_cast<std::size_t>(half));
    for (int i = 0; i < half; ++i) {
        real z = std::fabs(static_cast<real>(guess(n - 1 - i)));
        real pp = 0;
        for (int it = 0; it < 100; ++it) {
            real p1 = pim4, p2 = 0;
            for (int j = 0; j < n; ++j) {
                const real p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(real(2) / (j + 1)) * p2 - std::sqrt(real(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(real(2 * n)) * p2;
            const real step = p1 / pp;
            z -= step;
            if (std::fabs(step) <= eps * std::max(real(1), std::fabs(z))) break;
        }
        if (n % 2 == 1 && i == half - 1) z = 0; // odd rules have an exact centre node
        roots[static_cast<std::size_t>(i)] = z;
        wts[static_cast<std::size_t>(i)] = 2 / (pp * pp);
    }

    HermiteRule rule;
    rule.order = n;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < half; ++i) {
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo] = -static_cast<double>(roots[lo]);
        rule.nodes[hi] = static_cast<double>(roots[lo]);
        rule.weights[lo] = rule.weights[hi] = static_cast<double>(wts[lo]);
    }
    return rule;
}

namespace {

constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Uniform on (0, 1]; never returns 0 so log() below stays finite.
double unit_uniform(std::uint64_t bits) noexcept {
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

struct Moments {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void push(double x) noexcept {
        ++count;
        const double d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (x - mean);
    }

    void merge(const Moments& o) noexcept {
        if (o.count == 0) return;
        const double na = static_cast<double>(count), nb = static_cast<double>(o.count);
        const double d = o.mean - mean;
        const double n = na + nb;
        mean += d * nb / n;
        m2 += o.m2 + d * d * na * nb / n;
        count += o.count;
    }
};

constexpr std::uint64_t shard_size = 1 << 16;

} // namespace

ComplexGaussianStream::ComplexGaussianStream(double variance, std::uint64_t seed)
    : variance_(variance), radius_scale_(std::sqrt(variance)), seed_(seed) {
    if (!(variance > 0.0) || !std::isfinite(variance))
        throw Error(Errc::invalid_argument, "noise variance must be positive and finite");
}

cplx ComplexGaussianStream::at(std::uint64_t index) const {
    const std::uint64_t key = mix64(seed_ + golden_gamma);
    const double u1 = unit_uniform(mix64(key ^ mix64((2 * index) * golden_gamma + 1)));
    const double u2 = unit_uniform(mix64(key ^ mix64((2 * index + 1) * golden_gamma + 1)));
    // Box-Muller: |N|^2 ~ variance * Exp(1), uniform phase.
    const double r = radius_scale_ * std::sqrt(-std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
}

std::vector<cplx> ComplexGaussianStream::take(std::uint64_t first, std::size_t count) const {
    std::vector<cplx> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = at(first + k);
    return out;
}

ComplexGaussianStream complex_gaussian_sample_stream(double variance, const MCConfig& cfg) {
    return ComplexGaussianStream(variance, cfg.seed);
}

MCResult mc_expect_complex_gaussian(const std::function<double(cplx)>& f, double variance,
                                    const MCConfig& cfg) {
    if (cfg.samples < 2)
        throw Error(Errc::insufficient_samples, "Monte-Carlo needs at least 2 samples");
    const ComplexGaussianStream stream(variance, cfg.seed);

    const std::uint64_t shards = (cfg.samples + shard_size - 1) / shard_size;
    std::vector<Moments> partial(static_cast<std::size_t>(shards));
    parallel_for(partial.size(), [&](std::size_t s) {
        const std::uint64_t first = s * shard_size;
        const std::uint64_t last = std::min(cfg.samples, first + shard_size);
        Moments m;
        for (std::uint64_t k = first; k < last; ++k) {
            const double v = f(stream.at(k));
            if (!std::isfinite(v))
                throw Error(Errc::numerical_domain,
                            "integrand is non-finite at sample " + std::to_string(k));
            m.push(v);
        }
        partial[s] = m;
    });

    Moments total;
    for (const auto& m : partial) total.merge(m);
    const double n = static_cast<double>(total.count);
    const double var = total.m2 / (n - 1.0);
    return {total.mean, std::sqrt(std::max(var, 0.0) / n)};
}

} // namespace ccsc
