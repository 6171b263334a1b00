#pragma once

#include <vector>

#include "fracsob/seminorms.hpp"
#include "fracsob/specfun.hpp"

namespace fracsob::limits {

using specfun::LimitDirection;

enum class Extrapolation { none, linear, richardson };

/// One sigma-sweep of sigma^{1-k}(1-sigma)^k |v|^p with its extrapolated
/// endpoint value, the theoretical right-hand side, and the relative error.
struct LimitStudy {
    LimitDirection direction = LimitDirection::to_one;
    int k = 1;
    int l = 0;
    double p = 2.0;
    domains::Domain domain = domains::Domain::box({0.0}, {1.0});
    std::vector<double> sigmas;
    std::vector<double> values;
    std::vector<quad::Estimate> estimates;
    double extrapolated = 0.0;
    double reference = 0.0;
    double rel_err = 0.0;
};

/// Geometric approach to the endpoint: dist = 2^-j, j = 2..8.
std::vector<double> default_sigmas(LimitDirection direction);

/// Theoretical limit c [v]^p for the valid (direction, k) pairs:
///   R^n:     (to_zero, k=0) and (to_one, k=1)
///   bounded: (to_zero, k=1) and (to_one, k=1)
/// Anything else is rejected with std::invalid_argument.
double reference_rhs(const funcspace::TestFunction& v, int l, double p,
                     const domains::Domain& omega, LimitDirection direction, int k,
                     const quad::QuadSpec& spec);

/// Sweeps sigma toward the endpoint, computing the Gagliardo semi-norm per
/// sigma (budget grows like (1-sigma)^{-1/2} near 1, capped at 64x), and
/// extrapolates. Richardson (two-point elimination on the last pair) is the
/// default; the linear least-squares fit is retained as an option.
LimitStudy limit_study(const funcspace::TestFunction& v, int l, double p,
                       const domains::Domain& omega, LimitDirection direction, int k,
                       std::span<const double> sigmas, const quad::QuadSpec& spec,
                       Extrapolation extrapolation = Extrapolation::richardson);

/// sigma -> 0+ study on a bounded domain with no prefactor; the reference is
/// the Dini semi-norm.
LimitStudy dini_limit_study(const funcspace::TestFunction& v, int l, double p,
                            const domains::Domain& omega, std::span<const double> sigmas,
                            const quad::QuadSpec& spec);

/// Mollified difference functional
///   eps d^{-eps} intint |v(x)-v(y)|^p |x-y|^{eps-n-p} dx dy,
/// d = diam(Omega); converges to K_{p,n} |grad v|^p_{0,p,Omega} as eps -> 0
/// and equals p(1-sigma) d^{-p(1-sigma)} |v|^p_{sigma,p,Omega} at
/// eps = p(1-sigma). Requires 0 < eps <= p.
double bbm_mollified_functional(const funcspace::TestFunction& v, double p,
                                const domains::Domain& omega, double eps,
                                const quad::QuadSpec& spec);

}  // namespace fracsob::limits
