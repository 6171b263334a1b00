#include "fracsob/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fracsob/quad.hpp"

namespace fracsob::specfun {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Lanczos coefficients, g = 7, 9 terms.
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

double log_gamma_lanczos(double x) {
    // valid for x >= 0.5
    double acc = kLanczos[0];
    for (int k = 1; k < 9; ++k)
        acc += kLanczos[k] / (x - 1.0 + k);
    const double t = x + kLanczosG - 0.5;
    return 0.5 * std::log(2.0 * kPi) + (x - 0.5) * std::log(t) - t + std::log(acc);
}

// t / sin(pi t), stable for |t| < 1e-8 where sin would lose the factor.
double t_over_sin_pi_t(double t) {
    if (std::abs(t) < 1e-8) {
        const double z = kPi * t;
        return (1.0 + z * z / 6.0) / kPi;
    }
    return t / std::sin(kPi * t);
}

double rel_gap(double reference, double other) {
    return std::abs(reference - other) / std::abs(reference);
}

// |S_{n-1}| * E[|omega_1|^p] by symmetrized Monte Carlo: every sample of the
// direction contributes the average of |omega_i|^p over all n coordinates.
double sphere_moment_monte_carlo(double p, int n, std::size_t samples) {
    quad::SplitMix64 rng(0x5eedULL, 17);
    double acc = 0.0, comp = 0.0;
    std::vector<double> w(static_cast<std::size_t>(n));
    for (std::size_t s = 0; s < samples; ++s) {
        double norm2 = 0.0;
        for (int i = 0; i < n; ++i) {
            w[static_cast<std::size_t>(i)] = rng.normal();
            norm2 += w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i)];
        }
        const double norm = std::sqrt(norm2);
        double avg = 0.0;
        for (int i = 0; i < n; ++i)
            avg += std::pow(std::abs(w[static_cast<std::size_t>(i)]) / norm, p);
        // Neumaier-compensated accumulation keeps the reduction deterministic
        // and stable for 1e6 terms.
        const double term = avg / n;
        const double t = acc + term;
        comp += (std::abs(acc) >= std::abs(term)) ? (acc - t) + term : (term - t) + acc;
        acc = t;
    }
    return sphere_area(n) * (acc + comp) / static_cast<double>(samples);
}

// int_{S_{n-1}} |omega . e_1|^p domega by direct quadrature.
double sphere_moment_quadrature(double p, int n) {
    if (n == 1)
        return 2.0;  // two points, |+-1|^p each
    if (n == 2) {
        const int N = 1 << 15;
        double acc = 0.0;
        for (int i = 0; i < N; ++i)
            acc += std::pow(std::abs(std::cos(2.0 * kPi * i / N)), p);
        return acc * 2.0 * kPi / N;
    }
    if (n == 3) {
        // product rule: int |cos phi|^p dphi * int_{-1}^{1} (1-u^2)^{p/2} du,
        // the u-integral via u = sin psi so the integrand cos^{p+1}(psi) is
        // smooth for Gauss-Legendre.
        const int Nphi = 1 << 14;
        double qphi = 0.0;
        for (int i = 0; i < Nphi; ++i)
            qphi += std::pow(std::abs(std::cos(2.0 * kPi * i / Nphi)), p);
        qphi *= 2.0 * kPi / Nphi;
        const auto& rule = quad::gauss_legendre(64);
        double qu = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double psi = 0.5 * kPi * rule.nodes[i];
            qu += 0.5 * kPi * rule.weights[i] * std::pow(std::cos(psi), p + 1.0);
        }
        return qphi * qu;
    }
    return sphere_moment_monte_carlo(p, n, 1000000);
}

// M_sigma by quadrature: graded head on [0,1], unit panels on [1,50],
// analytic tail 1/(sigma T^{2 sigma}) minus the oscillatory remainder
// int_T^inf 2 cos(t) t^{-1-2 sigma} dt summed by repeated integration by
// parts. The integrand uses 4 sin^2(t/2), which is 2(1-cos t) without the
// cancellation for small t.
double m_line_quadrature(double sigma) {
    const double T = 50.0;
    const double c = 1.0 + 2.0 * sigma;
    const auto& rule = quad::gauss_legendre(24);

    auto integrand = [&](double t) {
        const double s = std::sin(0.5 * t);
        return 4.0 * s * s * std::pow(t, -c);
    };

    // head [0,1]: t = u^gamma with gamma = 1/(2-2 sigma); 8 geometric panels
    const double gamma = 1.0 / (2.0 - 2.0 * sigma);
    double head = 0.0;
    double hi = 1.0;
    for (int panel = 0; panel < 8; ++panel) {
        const double lo = (panel == 7) ? 0.0 : hi * 0.25;
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double u = mid + half * rule.nodes[i];
            const double t = std::pow(u, gamma);
            head += half * rule.weights[i] * integrand(t) * gamma * std::pow(u, gamma - 1.0);
        }
        hi = lo;
    }

    // body [1,50], one panel per unit interval resolves the oscillation
    double body = 0.0;
    for (int k = 1; k < 50; ++k) {
        const double mid = k + 0.5;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            body += 0.5 * rule.weights[i] * integrand(mid + 0.5 * rule.nodes[i]);
    }

    // oscillatory remainder, 8 integration-by-parts pairs:
    //   int_T^inf cos(t) g(t) dt = sum_m (-1)^{m+1} [sin T g^(2m)(T) + cos T g^(2m+1)(T)]
    // with g(t) = 2 t^{-c}, g^(j)(T) = 2 (-1)^j c(c+1)...(c+j-1) T^{-c-j}.
    double osc = 0.0;
    double deriv_scale = 2.0;  // prod of (c+i), running
    double Tpow = std::pow(T, -c);
    const double sT = std::sin(T), cT = std::cos(T);
    double sign = -1.0;
    for (int m = 0; m < 8; ++m) {
        const double g_even = deriv_scale * Tpow;          // |g^(2m)|
        deriv_scale *= (c + 2.0 * m);
        Tpow /= T;
        const double g_odd = deriv_scale * Tpow;           // |g^(2m+1)|
        deriv_scale *= (c + 2.0 * m + 1.0);
        Tpow /= T;
        osc += sign * (sT * g_even - cT * g_odd);          // g^(2m) >= 0 alternates sign
        sign = -sign;
    }

    return head + body + 1.0 / (sigma * std::pow(T, 2.0 * sigma)) - osc;
}

}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0))
        throw std::domain_error("log_gamma: requires x > 0");
    if (x < 0.5)  // reflection keeps the Lanczos argument >= 0.5
        return std::log(kPi / std::sin(kPi * x)) - log_gamma_lanczos(1.0 - x);
    return log_gamma_lanczos(x);
}

double sphere_area(int n) {
    if (n < 1)
        throw std::domain_error("sphere_area: requires n >= 1");
    return 2.0 * std::exp(0.5 * n * std::log(kPi) - log_gamma(0.5 * n));
}

double ball_volume(int n) {
    if (n < 1)
        throw std::domain_error("ball_volume: requires n >= 1");
    return std::exp(0.5 * n * std::log(kPi) - log_gamma(0.5 * n + 1.0));
}

ConstantReport constant_K(double p, int n, KMethod method) {
    if (p < 0.0)
        throw std::domain_error("constant_K: requires p >= 0");
    if (n < 1)
        throw std::domain_error("constant_K: requires n >= 1");
    ConstantReport rep;
    rep.name = "K";
    rep.closed_form = 2.0 * std::exp(0.5 * (n - 1) * std::log(kPi) +
                                     log_gamma(0.5 * (p + 1.0)) -
                                     log_gamma(0.5 * (n + p)));
    if (method == KMethod::sphere_quadrature) {
        rep.oracle = sphere_moment_quadrature(p, n);
        rep.rel_err = rel_gap(rep.closed_form, *rep.oracle);
    }
    return rep;
}

ConstantReport constant_M(double sigma, MMethod method) {
    if (!(sigma > 0.0 && sigma < 1.0))
        throw std::domain_error("constant_M: requires sigma in (0,1)");
    ConstantReport rep;
    rep.name = "M";
    rep.closed_form = kPi / (std::exp(log_gamma(1.0 + 2.0 * sigma)) * std::sin(kPi * sigma));
    if (method == MMethod::line_quadrature) {
        rep.oracle = m_line_quadrature(sigma);
        rep.rel_err = rel_gap(rep.closed_form, *rep.oracle);
    }
    return rep;
}

ConstantReport constant_G(double sigma, int n) {
    if (!(sigma > 0.0 && sigma < 1.0))
        throw std::domain_error("constant_G: requires sigma in (0,1)");
    if (n < 1)
        throw std::domain_error("constant_G: requires n >= 1");
    ConstantReport rep;
    rep.name = "G";
    rep.closed_form = 2.0 * std::exp(0.5 * (n + 1) * std::log(kPi) +
                                     log_gamma(sigma + 0.5) -
                                     log_gamma(sigma + 0.5 * n) -
                                     log_gamma(1.0 + 2.0 * sigma)) /
                      std::sin(kPi * sigma);
    rep.oracle = constant_K(2.0 * sigma, n).closed_form * constant_M(sigma).closed_form;
    rep.rel_err = rel_gap(rep.closed_form, *rep.oracle);
    return rep;
}

double limit_constant(LimitDirection dir, double p, int n) {
    if (p < 1.0)
        throw std::domain_error("limit_constant: requires p >= 1");
    if (n < 1)
        throw std::domain_error("limit_constant: requires n >= 1");
    if (dir == LimitDirection::to_one)
        return constant_K(p, n).closed_form / p;
    return 2.0 * sphere_area(n) / p;
}

double lambda_norm(double sigma, double p) {
    if (!(sigma >= 0.0 && sigma < 1.0))
        throw std::domain_error("lambda_norm: requires sigma in [0,1)");
    if (p < 1.0)
        throw std::domain_error("lambda_norm: requires p >= 1");
    if (sigma == 0.0)
        return 1.0;
    return std::pow(sigma * (1.0 - sigma), 1.0 / p);
}

double sigma_times_G(double sigma, int n) {
    if (!(sigma >= 0.0 && sigma < 1.0))
        throw std::domain_error("sigma_times_G: requires sigma in [0,1)");
    if (n < 1)
        throw std::domain_error("sigma_times_G: requires n >= 1");
    return 2.0 * std::exp(0.5 * (n + 1) * std::log(kPi) +
                          log_gamma(sigma + 0.5) -
                          log_gamma(sigma + 0.5 * n) -
                          log_gamma(1.0 + 2.0 * sigma)) *
           t_over_sin_pi_t(sigma);
}

double one_minus_sigma_times_G(double sigma, int n) {
    if (!(sigma > 0.0 && sigma <= 1.0))
        throw std::domain_error("one_minus_sigma_times_G: requires sigma in (0,1]");
    if (n < 1)
        throw std::domain_error("one_minus_sigma_times_G: requires n >= 1");
    // sin(pi sigma) = sin(pi (1-sigma))
    return 2.0 * std::exp(0.5 * (n + 1) * std::log(kPi) +
                          log_gamma(sigma + 0.5) -
                          log_gamma(sigma + 0.5 * n) -
                          log_gamma(1.0 + 2.0 * sigma)) *
           t_over_sin_pi_t(1.0 - sigma);
}

}  // namespace fracsob::specfun
