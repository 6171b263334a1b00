#pragma once

#include "fracsob/domains.hpp"
#include "fracsob/funcspace.hpp"
#include "fracsob/quad.hpp"

namespace fracsob::seminorms {

/// Order r = l + sigma of a (possibly fractional) semi-norm, with the
/// integrability exponent p. sigma in [0,1), l = floor(r) whenever sigma > 0.
struct FracOrder {
    int l = 0;
    double sigma = 0.0;
    double p = 2.0;

    double r() const { return l + sigma; }
    void validate() const;
};

enum class Kind {
    integer,
    gradient,
    gagliardo,
    dini,
    normalized_lambda,
    normalized_one_minus_sigma,
};

struct SeminormResult {
    double value_p = 0.0;  // |v|^p, the quantity every limit theorem is stated for
    double value = 0.0;    // p-th root
    quad::Estimate estimate;
    FracOrder order;
    domains::Domain domain = domains::Domain::box({0.0}, {1.0});
    Kind kind = Kind::integer;
};

/// |v|_{j,p,Omega}^p = sum_{|alpha|=j} int |d^alpha v|^p
SeminormResult integer_seminorm(const funcspace::TestFunction& v, int j, double p,
                                const domains::Domain& omega, const quad::QuadSpec& spec);

/// |grad v|_{j,p,Omega}^p = sum_{|alpha|=j} int |grad(d^alpha v)|^p,
/// |.| the Euclidean norm of the gradient vector.
SeminormResult gradient_seminorm(const funcspace::TestFunction& v, int j, double p,
                                 const domains::Domain& omega, const quad::QuadSpec& spec);

/// Gagliardo semi-norm of order l + sigma, sigma in (0,1):
/// sum_{|alpha|=l} intint |d^alpha v(x) - d^alpha v(y)|^p / |x-y|^{n+p sigma}
SeminormResult gagliardo_seminorm(const funcspace::TestFunction& v, const FracOrder& order,
                                  const domains::Domain& omega, const quad::QuadSpec& spec);

/// Dini semi-norm (kernel |x-y|^{-n}); bounded domains only.
SeminormResult dini_seminorm(const funcspace::TestFunction& v, int l, double p,
                             const domains::Domain& omega, const quad::QuadSpec& spec);

/// Averaged modulus of smoothness, p-th power:
/// t^{-n} int_{|h|<=t} int |Delta_h v|^p dx dh with Delta_h v extended by
/// zero outside Omega. Bounded box domains.
double averaged_modulus_p(const funcspace::TestFunction& v, double t, double p,
                          const domains::Domain& omega, const quad::QuadSpec& spec);

/// Dini semi-norm (p-th power) through the modulus identity
/// n int_0^inf averaged_modulus_p(v,t)/t dt, summed over |alpha| = l; the
/// t-integral uses dyadic panels on (0, diam] and the exact power-law tail.
double dini_via_modulus_p(const funcspace::TestFunction& v, int l, double p,
                          const domains::Domain& omega, const quad::QuadSpec& spec);

enum class Normalization { lambda, one_minus_sigma };

/// lambda flavour: (sigma(1-sigma))^{1/p} |v|_{r,p,Omega} (integer semi-norm
/// at sigma = 0). one_minus_sigma flavour: (1-sigma)^{1/p} |v|_{r,p,Omega},
/// bounded domains.
SeminormResult normalized_seminorm(const funcspace::TestFunction& v, const FracOrder& order,
                                   const domains::Domain& omega, Normalization flavor,
                                   const quad::QuadSpec& spec);

/// Adapter handing a symbolic function (value + exact directional
/// derivative) to the double-integral engine.
quad::DifferenceIntegrand difference_integrand(const funcspace::TestFunction& w);

}  // namespace fracsob::seminorms
