#include "fracsob/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "fracsob/specfun.hpp"

namespace fracsob::spectral {

using funcspace::MultiIndex;
using funcspace::TestFunction;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// int_{S_{n-1}} prod |omega_i|^{g_i} domega; zero for any odd exponent, else
// 2 prod Gamma((g_i+1)/2) / Gamma((n+|g|)/2)
double sphere_monomial_moment(std::span<const int> g) {
    int total = 0;
    double log_num = 0.0;
    for (int gi : g) {
        if (gi % 2 != 0)
            return 0.0;
        total += gi;
        log_num += specfun::log_gamma(0.5 * (gi + 1));
    }
    const int n = static_cast<int>(g.size());
    return 2.0 * std::exp(log_num - specfun::log_gamma(0.5 * (n + total)));
}

// |vhat|^2 as a centered polynomial-times-Gaussian; empty optional when the
// structure does not reduce (off-center transform)
struct SquaredTransform {
    TestFunction sq;   // real coefficients, centered
    double lambda;     // exp(-lambda |xi|^2)
};

std::optional<SquaredTransform> squared_transform(const TestFunction& v) {
    if (!v.has_closed_fourier())
        return std::nullopt;
    const TestFunction vhat = v.fourier_transform();
    TestFunction sq = vhat.multiply(vhat.conjugate());
    for (double c : sq.center())
        if (c != 0.0)
            return std::nullopt;
    return SquaredTransform{std::move(sq), 2.0 * vhat.gaussian_width()};
}

// closed form of int |xi|^{2r} xi^{2 beta} |vhat|^2 for the reduced structure
double weighted_energy_closed(const SquaredTransform& st, double r,
                              std::span<const int> extra) {
    const int n = st.sq.dim();
    double total = 0.0;
    for (const auto& term : st.sq.terms()) {
        std::vector<int> g(term.powers);
        for (int i = 0; i < n; ++i)
            g[static_cast<std::size_t>(i)] += 2 * extra[static_cast<std::size_t>(i)];
        const double ang = sphere_monomial_moment(g);
        if (ang == 0.0)
            continue;
        int deg = 0;
        for (int gi : g)
            deg += gi;
        // int_0^inf rho^{2r+deg+n-1} e^{-lambda rho^2} drho
        const double ex = r + 0.5 * (deg + n);
        const double radial = 0.5 * std::exp(specfun::log_gamma(ex) - ex * std::log(st.lambda));
        total += term.coef.real() * ang * radial;
    }
    return total;
}

// truncation radius capturing the Gaussian decay of |vhat|^2 to ~1e-18
double cutoff_radius(const SquaredTransform& st, double r) {
    const int deg = st.sq.poly_degree();
    const double s = (45.0 + 2.0 * (2.0 * r + deg + st.sq.dim())) / st.lambda;
    return std::sqrt(s);
}

double energy_by_quadrature(const TestFunction& vhat, double r, double radius,
                            const quad::QuadSpec& spec, quad::Estimate& est) {
    const int n = vhat.dim();
    const auto omega = domains::Domain::full_space(n, radius);
    quad::QuadSpec qs = spec;
    if (qs.method == quad::Method::monte_carlo || qs.method == quad::Method::polar_singular)
        qs.method = quad::Method::gauss_tensor;
    qs.order_or_samples = std::max<long long>(qs.order_or_samples, 48);
    est = quad::integrate_nd(
        [&](std::span<const double> xi) {
            double norm2 = 0.0;
            for (double c : xi)
                norm2 += c * c;
            const double w = r == 0.0 ? 1.0 : std::pow(norm2, r);
            const double m = std::abs(vhat.eval_complex(xi));
            return w * m * m;
        },
        omega, qs);
    return est.value;
}

}  // namespace

SpectralEnergy spectral_energy(const TestFunction& v, double r, const quad::QuadSpec& spec) {
    if (r < 0.0)
        throw std::domain_error("spectral_energy: requires r >= 0");
    SpectralEnergy out;
    out.r = r;
    if (v.is_identically_zero())
        return out;
    const auto st = squared_transform(v);
    if (st) {
        out.method = EnergyMethod::closed_form;
        const std::vector<int> zero(static_cast<std::size_t>(v.dim()), 0);
        out.value = weighted_energy_closed(*st, r, zero);
        out.estimate.value = out.value;
        out.estimate.err_abs = 1e-14 * std::abs(out.value);
        return out;
    }
    if (!v.has_closed_fourier())
        throw std::domain_error("spectral_energy: function has no closed-form transform");
    const TestFunction vhat = v.fourier_transform();
    out.method = EnergyMethod::quadrature;
    out.value = energy_by_quadrature(vhat, r, 12.0 / std::sqrt(vhat.gaussian_width()),
                                     spec, out.estimate);
    return out;
}

double gagliardo_via_spectral(const TestFunction& v, double sigma, const quad::QuadSpec& spec) {
    if (!(sigma > 0.0 && sigma < 1.0))
        throw std::domain_error("gagliardo_via_spectral: requires sigma in (0,1)");
    const int n = v.dim();
    const double G = specfun::constant_G(sigma, n).closed_form;
    const SpectralEnergy e = spectral_energy(v, sigma, spec);
    return std::pow(2.0 * kPi, -n) * G * e.value;
}

MembershipVerdict membership_htilde(const TestFunction& v, double r, double threshold) {
    if (r < 0.0)
        throw std::domain_error("membership_htilde: requires r >= 0");
    if (!v.has_closed_fourier())
        throw std::invalid_argument(
            "membership_htilde: function is outside the transform catalog");
    MembershipVerdict verdict;
    if (v.is_identically_zero()) {
        verdict.finite = true;
        return verdict;
    }
    const TestFunction vhat = v.fourier_transform();
    const auto st = squared_transform(v);
    const double base_radius =
        st ? cutoff_radius(*st, r) : 12.0 / std::sqrt(vhat.gaussian_width());
    quad::QuadSpec qs;
    qs.method = quad::Method::gauss_tensor;
    qs.order_or_samples = 64;
    quad::Estimate e1, e2;
    const double v1 = energy_by_quadrature(vhat, r, base_radius, qs, e1);
    const double v2 = energy_by_quadrature(vhat, r, 2.0 * base_radius, qs, e2);
    verdict.value = v2;
    verdict.doubling_gap = std::abs(v2 - v1) / std::max(std::abs(v2), 1e-300);
    verdict.finite = verdict.doubling_gap < threshold;
    return verdict;
}

BeppoLeviVerdict membership_beppo_levi(const TestFunction& v, int m, double s,
                                       double threshold) {
    if (m < 0 || s < 0.0)
        throw std::domain_error("membership_beppo_levi: requires m >= 0 and s >= 0");
    if (!v.has_closed_fourier())
        throw std::invalid_argument(
            "membership_beppo_levi: function is outside the transform catalog");
    BeppoLeviVerdict verdict;
    verdict.finite = true;
    const auto st = squared_transform(v);
    for (const auto& alpha : funcspace::multi_indices(v.dim(), m)) {
        BeppoLeviEntry entry{alpha, 0.0, false};
        if (st) {
            // energy of d^alpha v at weight s equals int |xi|^{2s} xi^{2 alpha} |vhat|^2
            entry.value = weighted_energy_closed(*st, s, alpha.exponents());
            entry.finite = std::isfinite(entry.value);
        } else {
            const MembershipVerdict mv = membership_htilde(v.derivative(alpha), s, threshold);
            entry.value = mv.value;
            entry.finite = mv.finite;
        }
        verdict.finite = verdict.finite && entry.finite;
        verdict.entries.push_back(std::move(entry));
    }
    return verdict;
}

EquivalenceReport equivalence_check(const TestFunction& v, int l, double sigma) {
    if (!(sigma > 0.0 && sigma < 1.0))
        throw std::domain_error("equivalence_check: requires sigma in (0,1)");
    if (l < 0)
        throw std::domain_error("equivalence_check: l must be a natural number");
    EquivalenceReport rep;
    rep.sigma = sigma;
    rep.l = l;
    rep.n = v.dim();
    const int n = v.dim();

    // numerator: |v|^2_{l+sigma,2,R^n} through the per-derivative identity
    const double G = specfun::constant_G(sigma, n).closed_form;
    const auto st = squared_transform(v);
    if (!st)
        throw std::invalid_argument("equivalence_check: needs a centered transform");
    double frac_sq = 0.0;
    for (const auto& alpha : funcspace::multi_indices(n, l))
        frac_sq += weighted_energy_closed(*st, sigma, alpha.exponents());
    frac_sq *= std::pow(2.0 * kPi, -n) * G;

    const std::vector<int> zero(static_cast<std::size_t>(n), 0);
    const double homog_sq = weighted_energy_closed(*st, l + sigma, zero);
    if (!(homog_sq > 0.0))
        throw std::domain_error("equivalence_check: vanishing spectral energy");

    rep.ratio = std::sqrt(2.0 * sigma * (1.0 - sigma) * frac_sq / homog_sq);

    // envelope of f(s) = 2 s(1-s)(2pi)^{-n} G_{s,n} over (0,1), endpoints by
    // the pole-cancelled products; l >= 1 lowers the floor by the largest
    // multinomial weight
    const double scale = 2.0 * std::pow(2.0 * kPi, -n);
    double fmin = scale * specfun::sigma_times_G(0.0, n);
    double fmax = fmin;
    const double fend = scale * specfun::one_minus_sigma_times_G(1.0, n);
    fmin = std::min(fmin, fend);
    fmax = std::max(fmax, fend);
    for (int k = 1; k < 1000; ++k) {
        const double s = k / 1000.0;
        const double f = scale * s * (1.0 - s) * specfun::constant_G(s, n).closed_form;
        fmin = std::min(fmin, f);
        fmax = std::max(fmax, f);
    }
    double max_binom = 1.0;
    for (const auto& alpha : funcspace::multi_indices(n, l))
        max_binom = std::max(max_binom, static_cast<double>(funcspace::multinomial(alpha)));
    rep.c1 = std::sqrt(fmin / max_binom);
    rep.c2 = std::sqrt(fmax);
    rep.within = rep.ratio >= rep.c1 * (1.0 - 1e-9) && rep.ratio <= rep.c2 * (1.0 + 1e-9);
    return rep;
}

}  // namespace fracsob::spectral
