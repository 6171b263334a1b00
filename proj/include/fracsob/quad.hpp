#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fracsob/domains.hpp"

namespace fracsob::quad {

enum class Method { gauss_tensor, adaptive, monte_carlo, polar_singular };

/// How an integral is to be computed. order_or_samples is the Gauss order
/// per axis (deterministic rules) or the sample count (Monte Carlo); every
/// run with the same spec (seed included) produces a bitwise-identical
/// Estimate.
struct QuadSpec {
    Method method = Method::gauss_tensor;
    long long order_or_samples = 16;
    std::uint64_t seed = 42;
    double rel_tol = 1e-6;

    void validate() const;
    QuadSpec scaled(double factor) const;  // budget multiplier, clamped to >= base
};

struct Estimate {
    double value = 0.0;
    double err_abs = 0.0;   // error estimate (upper-bound flavoured, not a guarantee)
    long long cost = 0;     // integrand evaluations
};

using Integrand = std::function<double(std::span<const double>)>;

/// Integral of g over Omega. full_space domains are truncated to the cube
/// |x_i| <= truncation_radius. Deterministic methods estimate the error from
/// a coarse/fine difference; monte_carlo reports the sample standard error.
/// A NaN or infinity from g raises std::runtime_error naming the point.
Estimate integrate_nd(const Integrand& g, const domains::Domain& omega, const QuadSpec& spec);

/// Integrand |w(x+h) - w(x)|^p of the double integral together with the
/// exact directional derivative used on the singular head, where forming the
/// difference in floating point would lose every digit.
struct DifferenceIntegrand {
    int dim = 1;
    std::function<double(std::span<const double>)> value;
    // grad w(x) . direction, |direction| = 1
    std::function<double(std::span<const double>, std::span<const double>)> dir_deriv;
};

/// Double integral over Omega x Omega of |w(x)-w(y)|^p / |x-y|^(n+t),
/// 0 <= t < p (Gagliardo kernel at t = p*sigma, Dini at t = 0).
///
/// Substituting y = x + r*omega, the radial integrand scales like
/// r^(p-t-1) at the origin; the head is integrated with the graded
/// substitution r = u^(1/(p-t)) (bounded integrand at u = 0) and the
/// macroscopic radii with dyadic panels. Below r = 1e-5*H the difference is
/// replaced by r^p |grad w . omega|^p evaluated at the midpoint.
/// Monte Carlo samples the same graded parameterization, so the estimator
/// variance stays finite for every t in [0, p).
Estimate integrate_difference_kernel(const DifferenceIntegrand& w,
                                     const domains::Domain& omega,
                                     double p, double t, const QuadSpec& spec);

// ---- shared numerical kernels ----

struct GaussRule {
    std::vector<double> nodes;    // on (-1, 1)
    std::vector<double> weights;
};

/// Gauss-Legendre rule of the given order (memoized).
const GaussRule& gauss_legendre(int order);

/// Deterministic splittable generator: splitmix64 streams keyed by
/// (seed, stream). Good enough statistically for 1e7-sample quadrature and
/// cheap to reproduce in parallel substreams.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed, std::uint64_t stream = 0);
    std::uint64_t next();
    double uniform();             // in [0, 1)
    double normal();              // standard normal (Box-Muller)

private:
    std::uint64_t state_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace fracsob::quad
