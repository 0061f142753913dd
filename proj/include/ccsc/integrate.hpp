#ifndef CCSC_INTEGRATE_HPP
#define CCSC_INTEGRATE_HPP

#include "ccsc/constellation.hpp"
#include "ccsc/error.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <sstream>
#include <vector>

namespace ccsc {

/// Gauss-Hermite rule for weight exp(-t^2) on the real line. Nodes are
/// ascending and symmetric; weights are positive and sum to sqrt(pi).
struct HermiteRule {
    int order = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline constexpr int max_hermite_order = 200;
inline constexpr int default_hermite_order = 32;

/// Order-n rule, 1 <= n <= 200. Throws Errc::invalid_order otherwise.
HermiteRule gauss_hermite(int n);

/// E[f(N)] for N ~ CN(0, variance) by the tensor-product rule
///   (1/pi) sum_a sum_b w_a w_b f(sqrt(variance) (t_a + i t_b)).
/// Exact for polynomials in (Re N, Im N) of per-axis degree <= 2n-1.
/// A non-finite f value raises Errc::numerical_domain naming the node.
///
/// frame_rotation turns the node grid by that angle (radians). The noise is
/// circularly symmetric, so the expectation is unchanged; the rule stays
/// exact for polynomials of total degree <= 2n-1.
template <class F>
double expect_complex_gaussian(F&& f, double variance, const HermiteRule& rule, double frame_rotation = 0.0) {
    if (!(variance > 0.0) || !std::isfinite(variance))
        throw Error(Errc::invalid_argument, "noise variance must be positive and finite");
    const cplx scale = frame_rotation == 0.0 ? cplx{std::sqrt(variance), 0.0}
                                             : std::polar(std::sqrt(variance), frame_rotation);
    const std::size_t n = rule.nodes.size();
    double total = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        double row = 0.0;
        for (std::size_t b = 0; b < n; ++b) {
            const cplx node = scale * cplx{rule.nodes[a], rule.nodes[b]};
            const double v = f(node);
            if (!std::isfinite(v)) {
                std::ostringstream msg;
                msg << "integrand is " << v << " at node (" << a << ", " << b << ") = " << node;
                throw Error(Errc::numerical_domain, msg.str());
            }
            row += rule.weights[b] * v;
        }
        total += rule.weights[a] * row;
    }
    return total / std::numbers::pi;
}

struct MCConfig {
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 0;
};

struct MCResult {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Counter-based stream of CN(0, variance) samples. Sample k is a pure
/// function of (seed, k, variance), so any index range can be drawn
/// independently and in any order.
class ComplexGaussianStream {
public:
    ComplexGaussianStream(double variance, std::uint64_t seed);

    cplx at(std::uint64_t index) const;
    cplx operator[](std::uint64_t index) const { return at(index); }

    /// Samples [first, first + count).
    std::vector<cplx> take(std::uint64_t first, std::size_t count) const;

    double variance() const noexcept { return variance_; }
    std::uint64_t seed() const noexcept { return seed_; }

private:
    double variance_;
    double radius_scale_;
    std::uint64_t seed_;
};

ComplexGaussianStream complex_gaussian_sample_stream(double variance, const MCConfig& cfg);

/// Sample mean and standard error of f(N) over cfg.samples draws of the
/// seeded stream. f must be safe to call concurrently; the stream is split
/// into fixed index shards merged in order, so the output is bit-identical
/// for identical inputs regardless of hardware thread count.
MCResult mc_expect_complex_gaussian(const std::function<double(cplx)>& f, double variance,
                                    const MCConfig& cfg);

} // namespace ccsc

#endif
