#include "fracsob/seminorms.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace fracsob::seminorms {

using funcspace::MultiIndex;
using funcspace::TestFunction;

namespace {

double pth_root(double value_p, double p) {
    return value_p <= 0.0 ? 0.0 : std::pow(value_p, 1.0 / p);
}

void check_exponent(double p) {
    if (p < 1.0)
        throw std::domain_error("seminorm: requires p >= 1");
}

}  // namespace

void FracOrder::validate() const {
    if (l < 0)
        throw std::domain_error("FracOrder: l must be a natural number");
    if (!(sigma >= 0.0 && sigma < 1.0))
        throw std::domain_error("FracOrder: sigma must lie in [0,1)");
    if (p < 1.0)
        throw std::domain_error("FracOrder: p must be >= 1");
}

quad::DifferenceIntegrand difference_integrand(const TestFunction& w) {
    quad::DifferenceIntegrand d;
    d.dim = w.dim();
    auto fn = std::make_shared<TestFunction>(w);
    auto grads = std::make_shared<std::vector<TestFunction>>(w.gradient());
    d.value = [fn](std::span<const double> x) { return (*fn)(x); };
    d.dir_deriv = [grads](std::span<const double> x, std::span<const double> dir) {
        double s = 0.0;
        for (std::size_t i = 0; i < grads->size(); ++i)
            s += (*grads)[i](x) * dir[i];
        return s;
    };
    return d;
}

SeminormResult integer_seminorm(const TestFunction& v, int j, double p,
                                const domains::Domain& omega, const quad::QuadSpec& spec) {
    check_exponent(p);
    if (j < 0)
        throw std::domain_error("integer_seminorm: j must be a natural number");
    if (v.dim() != omega.dim())
        throw std::invalid_argument("integer_seminorm: dimension mismatch");
    SeminormResult res;
    res.order = {j, 0.0, p};
    res.domain = omega;
    res.kind = Kind::integer;
    for (const auto& alpha : funcspace::multi_indices(v.dim(), j)) {
        const TestFunction d = v.derivative(alpha);
        if (d.is_identically_zero())
            continue;
        const auto est = quad::integrate_nd(
            [&](std::span<const double> x) { return std::pow(std::abs(d(x)), p); }, omega, spec);
        res.value_p += est.value;
        res.estimate.value += est.value;
        res.estimate.err_abs += est.err_abs;
        res.estimate.cost += est.cost;
    }
    res.value = pth_root(res.value_p, p);
    return res;
}

SeminormResult gradient_seminorm(const TestFunction& v, int j, double p,
                                 const domains::Domain& omega, const quad::QuadSpec& spec) {
    check_exponent(p);
    if (j < 0)
        throw std::domain_error("gradient_seminorm: j must be a natural number");
    if (v.dim() != omega.dim())
        throw std::invalid_argument("gradient_seminorm: dimension mismatch");
    SeminormResult res;
    res.order = {j, 0.0, p};
    res.domain = omega;
    res.kind = Kind::gradient;
    for (const auto& alpha : funcspace::multi_indices(v.dim(), j)) {
        const std::vector<TestFunction> grads = v.derivative(alpha).gradient();
        bool all_zero = true;
        for (const auto& g : grads)
            if (!g.is_identically_zero())
                all_zero = false;
        if (all_zero)
            continue;
        const auto est = quad::integrate_nd(
            [&](std::span<const double> x) {
                double s = 0.0;
                for (const auto& g : grads) {
                    const double gi = g(x);
                    s += gi * gi;
                }
                return std::pow(s, 0.5 * p);
            },
            omega, spec);
        res.value_p += est.value;
        res.estimate.value += est.value;
        res.estimate.err_abs += est.err_abs;
        res.estimate.cost += est.cost;
    }
    res.value = pth_root(res.value_p, p);
    return res;
}

namespace {

// shared by the Gagliardo and Dini forms; t is the kernel power |h|^{-(n+t)}
SeminormResult difference_seminorm(const TestFunction& v, int l, double p, double kernel_t,
                                   Kind kind, const domains::Domain& omega,
                                   const quad::QuadSpec& spec) {
    SeminormResult res;
    res.order = {l, kind == Kind::gagliardo ? kernel_t / p : 0.0, p};
    res.domain = omega;
    res.kind = kind;
    for (const auto& alpha : funcspace::multi_indices(v.dim(), l)) {
        const TestFunction d = v.derivative(alpha);
        if (d.is_identically_zero())
            continue;
        const auto w = difference_integrand(d);
        const auto est = quad::integrate_difference_kernel(w, omega, p, kernel_t, spec);
        res.value_p += est.value;
        res.estimate.value += est.value;
        res.estimate.err_abs += est.err_abs;
        res.estimate.cost += est.cost;
    }
    res.value = pth_root(res.value_p, p);
    return res;
}

}  // namespace

SeminormResult gagliardo_seminorm(const TestFunction& v, const FracOrder& order,
                                  const domains::Domain& omega, const quad::QuadSpec& spec) {
    order.validate();
    if (!(order.sigma > 0.0))
        throw std::domain_error("gagliardo_seminorm: requires sigma in (0,1)");
    if (v.dim() != omega.dim())
        throw std::invalid_argument("gagliardo_seminorm: dimension mismatch");
    return difference_seminorm(v, order.l, order.p, order.p * order.sigma, Kind::gagliardo,
                               omega, spec);
}

SeminormResult dini_seminorm(const TestFunction& v, int l, double p,
                             const domains::Domain& omega, const quad::QuadSpec& spec) {
    check_exponent(p);
    if (l < 0)
        throw std::domain_error("dini_seminorm: l must be a natural number");
    if (!omega.bounded())
        throw std::domain_error("dini_seminorm: requires a bounded domain");
    if (v.dim() != omega.dim())
        throw std::invalid_argument("dini_seminorm: dimension mismatch");
    return difference_seminorm(v, l, p, 0.0, Kind::dini, omega, spec);
}

namespace {

// int_{X(h)} |v(x+h) - v(x)|^p dx for a box domain, by tensor Gauss rules
double shift_difference_integral_p(const TestFunction& v, std::span<const double> h,
                                   const domains::Domain& omega, int mx, double p,
                                   long long& cost) {
    const int n = omega.dim();
    std::vector<double> lo(omega.lo()), hi(omega.hi());
    for (int i = 0; i < n; ++i) {
        const std::size_t ii = static_cast<std::size_t>(i);
        lo[ii] = std::max(lo[ii], lo[ii] - h[ii]);
        hi[ii] = std::min(hi[ii], hi[ii] - h[ii]);
        if (!(lo[ii] < hi[ii]))
            return 0.0;
    }
    const auto& rule = quad::gauss_legendre(mx);
    const std::size_t m = rule.nodes.size();
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    std::vector<double> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
    double acc = 0.0;
    while (true) {
        double wt = 1.0;
        for (int i = 0; i < n; ++i) {
            const std::size_t ii = static_cast<std::size_t>(i);
            const double mid = 0.5 * (lo[ii] + hi[ii]);
            const double half = 0.5 * (hi[ii] - lo[ii]);
            x[ii] = mid + half * rule.nodes[idx[ii]];
            y[ii] = x[ii] + h[ii];
            wt *= half * rule.weights[idx[ii]];
        }
        acc += wt * std::pow(std::abs(v(y) - v(x)), p);
        ++cost;
        int axis = 0;
        while (axis < n && ++idx[static_cast<std::size_t>(axis)] == m) {
            idx[static_cast<std::size_t>(axis)] = 0;
            ++axis;
        }
        if (axis == n)
            break;
    }
    return acc;
}

}  // namespace

double averaged_modulus_p(const TestFunction& v, double t, double p,
                          const domains::Domain& omega, const quad::QuadSpec& spec) {
    check_exponent(p);
    if (!(t > 0.0))
        throw std::domain_error("averaged_modulus: requires t > 0");
    if (omega.kind() != domains::Kind::box)
        throw std::domain_error("averaged_modulus: implemented for box domains");
    if (v.dim() != omega.dim())
        throw std::invalid_argument("averaged_modulus: dimension mismatch");
    spec.validate();
    const int n = omega.dim();
    const int base = static_cast<int>(std::clamp<long long>(spec.order_or_samples, 2, 64));
    const int mr = std::clamp(2 * base, 12, 64);
    const int mx = std::clamp(4 * base, 16, 128);
    long long cost = 0;

    // directions with symmetry factor 2 (half sphere); n = 1 needs only +1
    std::vector<std::vector<double>> dirs;
    std::vector<double> wts;
    if (n == 1) {
        dirs.push_back({1.0});
        wts.push_back(2.0);
    } else if (n == 2) {
        const int m = std::max(16, 2 * base);
        for (int j = 0; j < m; ++j) {
            const double th = M_PI * (j + 0.5) / m;
            dirs.push_back({std::cos(th), std::sin(th)});
            wts.push_back(2.0 * M_PI / m);
        }
    } else {
        throw std::domain_error("averaged_modulus: implemented for n <= 2");
    }

    const auto& rule = quad::gauss_legendre(mr);
    double total = 0.0;
    std::vector<double> h(static_cast<std::size_t>(n));
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        // radial cutoff where the shifted box empties
        double r_max = t;
        for (int i = 0; i < n; ++i) {
            const double di = std::abs(dirs[d][static_cast<std::size_t>(i)]);
            if (di > 0.0)
                r_max = std::min(r_max, (omega.hi()[static_cast<std::size_t>(i)] -
                                         omega.lo()[static_cast<std::size_t>(i)]) /
                                            di);
        }
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double r = 0.5 * r_max * (rule.nodes[i] + 1.0);
            const double wr = 0.5 * r_max * rule.weights[i] * std::pow(r, n - 1);
            for (int k = 0; k < n; ++k)
                h[static_cast<std::size_t>(k)] = r * dirs[d][static_cast<std::size_t>(k)];
            total += wts[d] * wr * shift_difference_integral_p(v, h, omega, mx, p, cost);
        }
    }
    return total / std::pow(t, n);
}

double dini_via_modulus_p(const TestFunction& v, int l, double p,
                          const domains::Domain& omega, const quad::QuadSpec& spec) {
    check_exponent(p);
    if (l < 0)
        throw std::domain_error("dini_via_modulus: l must be a natural number");
    if (omega.kind() != domains::Kind::box)
        throw std::domain_error("dini_via_modulus: implemented for box domains");
    const int n = omega.dim();
    const double d = omega.diameter();
    const auto& rule = quad::gauss_legendre(8);
    double total = 0.0;
    for (const auto& alpha : funcspace::multi_indices(v.dim(), l)) {
        const TestFunction w = v.derivative(alpha);
        if (w.is_identically_zero())
            continue;
        auto modulus = [&](double t) { return averaged_modulus_p(w, t, p, omega, spec); };
        // dyadic panels over (d 2^{-K}, d]
        const int K = 18;
        double part = 0.0;
        double hi = d;
        for (int k = 0; k < K; ++k) {
            const double lo = 0.5 * hi;
            const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double t = mid + half * rule.nodes[i];
                part += half * rule.weights[i] * modulus(t) / t;
            }
            hi = lo;
        }
        // head: modulus ~ t^p, so n int_0^tm ~ n modulus(tm)/p; tail beyond the
        // diameter: modulus = C t^{-n} exactly, integral = modulus(d)/n * n
        const double head = modulus(hi) / p;
        total += static_cast<double>(n) * (part + head) + modulus(d);
    }
    return total;
}

SeminormResult normalized_seminorm(const TestFunction& v, const FracOrder& order,
                                   const domains::Domain& omega, Normalization flavor,
                                   const quad::QuadSpec& spec) {
    order.validate();
    if (flavor == Normalization::one_minus_sigma && !omega.bounded())
        throw std::domain_error("normalized_seminorm: one_minus_sigma flavour needs a bounded domain");
    SeminormResult base = order.sigma == 0.0
                              ? integer_seminorm(v, order.l, order.p, omega, spec)
                              : gagliardo_seminorm(v, order, omega, spec);
    double factor = 1.0;
    if (order.sigma > 0.0)
        factor = flavor == Normalization::lambda
                     ? std::pow(order.sigma * (1.0 - order.sigma), 1.0 / order.p)
                     : std::pow(1.0 - order.sigma, 1.0 / order.p);
    SeminormResult res = base;
    res.kind = flavor == Normalization::lambda ? Kind::normalized_lambda
                                               : Kind::normalized_one_minus_sigma;
    const double factor_p = std::pow(factor, order.p);
    res.value = factor * base.value;
    res.value_p = factor_p * base.value_p;
    res.estimate.value = factor_p * base.estimate.value;
    res.estimate.err_abs = factor_p * base.estimate.err_abs;
    return res;
}

}  // namespace fracsob::seminorms
