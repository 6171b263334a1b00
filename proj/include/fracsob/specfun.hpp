#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace fracsob::specfun {

/// Natural logarithm of the Gamma function, x > 0.
/// Lanczos approximation (g = 7, 9 coefficients); absolute error below
/// 1e-13 on [0.5, 50]. Throws std::domain_error for x <= 0.
double log_gamma(double x);

/// Area of the unit sphere S_{n-1} in R^n: 2 pi^(n/2) / Gamma(n/2).
/// S_0 consists of two points with counting measure, so sphere_area(1) == 2.
double sphere_area(int n);

/// Volume of the unit ball in R^n: pi^(n/2) / Gamma(n/2 + 1).
double ball_volume(int n);

/// One named constant together with an optional independent oracle value.
struct ConstantReport {
    std::string name;
    double closed_form = 0.0;
    std::optional<double> oracle;
    std::optional<double> rel_err;   // |closed_form - oracle| / |closed_form|
};

enum class KMethod { closed_form, sphere_quadrature };
enum class MMethod { closed_form, line_quadrature };

/// K_{p,n} = int_{S_{n-1}} |omega . nu|^p domega
///         = 2 pi^((n-1)/2) Gamma((p+1)/2) / Gamma((n+p)/2),   p >= 0.
/// With sphere_quadrature, the defining surface integral is evaluated
/// numerically (exact two-point sum for n=1, trapezoid/product rules for
/// n=2,3, symmetrized Monte Carlo with 1e6 points for n>=4) and reported as
/// the oracle.
ConstantReport constant_K(double p, int n, KMethod method = KMethod::closed_form);

/// M_sigma = int_0^inf 2(1 - cos t) / t^(1+2 sigma) dt
///         = pi / (Gamma(1+2 sigma) sin(pi sigma)),   sigma in (0,1).
/// line_quadrature integrates [0, 50] directly (graded substitution on the
/// singular head) and closes the tail analytically.
ConstantReport constant_M(double sigma, MMethod method = MMethod::closed_form);

/// G_{sigma,n} = K_{2 sigma,n} * M_sigma
///             = 2 pi^((n+1)/2) Gamma(sigma+1/2)
///               / (Gamma(sigma+n/2) Gamma(1+2 sigma) sin(pi sigma)).
/// The K*M product is always attached as the oracle.
ConstantReport constant_G(double sigma, int n);

enum class LimitDirection { to_zero, to_one };

/// Constant c of the endpoint limits of sigma^(1-k)(1-sigma)^k |v|^p:
///   to_one  -> K_{p,n} / p
///   to_zero -> 4 pi^(n/2) / (p Gamma(n/2)) = (2/p) |S_{n-1}|
/// Requires p >= 1.
double limit_constant(LimitDirection dir, double p, int n);

/// Normalization factor lambda_{sigma,p}: (sigma(1-sigma))^(1/p) on (0,1),
/// 1 at sigma = 0.
double lambda_norm(double sigma, double p);

/// sigma * G_{sigma,n} with the sigma/sin(pi sigma) pole factor cancelled
/// analytically; continuous down to sigma = 0 where it equals |S_{n-1}|.
double sigma_times_G(double sigma, int n);

/// (1-sigma) * G_{sigma,n}, pole at sigma = 1 cancelled; continuous up to
/// sigma = 1 where it equals pi^(n/2) / (n Gamma(n/2)).
double one_minus_sigma_times_G(double sigma, int n);

}  // namespace fracsob::specfun
