#include "fracsob/limits.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fracsob::limits {

using funcspace::TestFunction;

namespace {

void check_pair(const domains::Domain& omega, LimitDirection direction, int k) {
    if (k != 0 && k != 1)
        throw std::invalid_argument("limit study: k must be 0 or 1");
    const bool bounded = omega.bounded();
    if (direction == LimitDirection::to_one && k == 1)
        return;
    if (direction == LimitDirection::to_zero && k == 0 && !bounded)
        return;
    if (direction == LimitDirection::to_zero && k == 1 && bounded)
        return;
    throw std::invalid_argument(
        "limit study: invalid (direction, k, domain) combination; valid cases are "
        "(to_zero, k=0) and (to_one, k=1) on R^n, (to_zero, k=1) and (to_one, k=1) "
        "on bounded domains");
}

double distance_to_endpoint(LimitDirection direction, double sigma) {
    return direction == LimitDirection::to_zero ? sigma : 1.0 - sigma;
}

double extrapolate(Extrapolation how, std::span<const double> dist,
                   std::span<const double> values) {
    const std::size_t m = dist.size();
    if (m == 0)
        throw std::invalid_argument("extrapolate: empty study");
    if (m == 1 || how == Extrapolation::none)
        return values[m - 1];
    if (how == Extrapolation::linear) {
        // least-squares intercept of value = L + a * dist
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            sx += dist[i];
            sy += values[i];
            sxx += dist[i] * dist[i];
            sxy += dist[i] * values[i];
        }
        const double den = m * sxx - sx * sx;
        return (sy * sxx - sx * sxy) / den;
    }
    // richardson: eliminate the leading O(dist) term with the last two points
    const double d1 = dist[m - 2], d2 = dist[m - 1];
    const double w1 = values[m - 2], w2 = values[m - 1];
    return w2 + (w2 - w1) * d2 / (d1 - d2);
}

}  // namespace

std::vector<double> default_sigmas(LimitDirection direction) {
    std::vector<double> out;
    for (int j = 2; j <= 8; ++j) {
        const double dist = std::pow(2.0, -j);
        out.push_back(direction == LimitDirection::to_zero ? dist : 1.0 - dist);
    }
    return out;
}

double reference_rhs(const TestFunction& v, int l, double p, const domains::Domain& omega,
                     LimitDirection direction, int k, const quad::QuadSpec& spec) {
    check_pair(omega, direction, k);
    const int n = omega.dim();
    if (direction == LimitDirection::to_one)
        return specfun::limit_constant(LimitDirection::to_one, p, n) *
               seminorms::gradient_seminorm(v, l, p, omega, spec).value_p;
    if (!omega.bounded())
        return specfun::limit_constant(LimitDirection::to_zero, p, n) *
               seminorms::integer_seminorm(v, l, p, omega, spec).value_p;
    return seminorms::dini_seminorm(v, l, p, omega, spec).value_p;
}

LimitStudy limit_study(const TestFunction& v, int l, double p, const domains::Domain& omega,
                       LimitDirection direction, int k, std::span<const double> sigmas,
                       const quad::QuadSpec& spec, Extrapolation extrapolation) {
    check_pair(omega, direction, k);
    if (sigmas.empty())
        throw std::invalid_argument("limit_study: needs at least one sigma");
    LimitStudy study;
    study.direction = direction;
    study.k = k;
    study.l = l;
    study.p = p;
    study.domain = omega;

    std::vector<double> dist;
    int failures = 0;
    double prev_dist = -1.0;
    for (double sigma : sigmas) {
        if (!(sigma > 0.0 && sigma < 1.0))
            throw std::invalid_argument("limit_study: sigmas must lie in (0,1)");
        const double d = distance_to_endpoint(direction, sigma);
        if (prev_dist >= 0.0 && d >= prev_dist)
            throw std::invalid_argument(
                "limit_study: sigmas must approach the endpoint monotonically");
        prev_dist = d;
        // kernel concentration near sigma = 1 costs resolution; grow the
        // budget like (1-sigma)^{-1/2}, capped at 64x
        quad::QuadSpec per_sigma = spec;
        if (direction == LimitDirection::to_one)
            per_sigma = spec.scaled(std::min(64.0, 1.0 / std::sqrt(1.0 - sigma)));
        study.sigmas.push_back(sigma);
        dist.push_back(d);
        try {
            const auto sr = seminorms::gagliardo_seminorm(v, {l, sigma, p}, omega, per_sigma);
            const double prefactor = std::pow(sigma, 1.0 - k) * std::pow(1.0 - sigma, k);
            study.values.push_back(prefactor * sr.value_p);
            quad::Estimate scaled = sr.estimate;
            scaled.value *= prefactor;
            scaled.err_abs *= prefactor;
            study.estimates.push_back(scaled);
        } catch (const std::runtime_error&) {
            study.values.push_back(std::numeric_limits<double>::quiet_NaN());
            study.estimates.push_back({});
            ++failures;
        }
    }
    if (failures * 5 > static_cast<int>(sigmas.size()))
        throw std::runtime_error("limit_study: more than 20% of the sigma points failed");
    if (failures > 0) {
        std::vector<double> gd, gv;
        for (std::size_t i = 0; i < study.values.size(); ++i)
            if (std::isfinite(study.values[i])) {
                gd.push_back(dist[i]);
                gv.push_back(study.values[i]);
            }
        study.extrapolated = extrapolate(extrapolation, gd, gv);
    } else {
        study.extrapolated = extrapolate(extrapolation, dist, study.values);
    }
    study.reference = reference_rhs(v, l, p, omega, direction, k, spec);
    if (study.reference != 0.0)
        study.rel_err = std::abs(study.extrapolated - study.reference) / std::abs(study.reference);
    else
        study.rel_err = std::abs(study.extrapolated);
    return study;
}

LimitStudy dini_limit_study(const TestFunction& v, int l, double p,
                            const domains::Domain& omega, std::span<const double> sigmas,
                            const quad::QuadSpec& spec) {
    if (!omega.bounded())
        throw std::invalid_argument("dini_limit_study: requires a bounded domain");
    if (sigmas.empty())
        throw std::invalid_argument("dini_limit_study: needs at least one sigma");
    LimitStudy study;
    study.direction = LimitDirection::to_zero;
    study.k = 1;  // the (1-sigma) factor tends to 1 and is omitted
    study.l = l;
    study.p = p;
    study.domain = omega;
    std::vector<double> dist;
    double prev = -1.0;
    for (double sigma : sigmas) {
        if (!(sigma > 0.0 && sigma < 1.0))
            throw std::invalid_argument("dini_limit_study: sigmas must lie in (0,1)");
        if (prev >= 0.0 && sigma >= prev)
            throw std::invalid_argument("dini_limit_study: sigmas must decrease toward 0");
        prev = sigma;
        const auto sr = seminorms::gagliardo_seminorm(v, {l, sigma, p}, omega, spec);
        study.sigmas.push_back(sigma);
        dist.push_back(sigma);
        study.values.push_back(sr.value_p);
        study.estimates.push_back(sr.estimate);
    }
    study.extrapolated = extrapolate(Extrapolation::richardson, dist, study.values);
    study.reference = seminorms::dini_seminorm(v, l, p, omega, spec).value_p;
    if (study.reference != 0.0)
        study.rel_err = std::abs(study.extrapolated - study.reference) / std::abs(study.reference);
    else
        study.rel_err = std::abs(study.extrapolated);
    return study;
}

double bbm_mollified_functional(const TestFunction& v, double p, const domains::Domain& omega,
                                double eps, const quad::QuadSpec& spec) {
    if (!omega.bounded())
        throw std::domain_error("bbm_mollified_functional: requires a bounded domain");
    if (!(eps > 0.0 && eps <= p))
        throw std::domain_error("bbm_mollified_functional: requires 0 < eps <= p");
    if (p < 1.0)
        throw std::domain_error("bbm_mollified_functional: requires p >= 1");
    const double d = omega.diameter();
    // rho_eps(|x-y|) = eps d^{-eps} |x-y|^{eps-n} against |x-y|^{-p}: the
    // combined kernel power is n + (p - eps)
    const auto w = seminorms::difference_integrand(v);
    const auto est = quad::integrate_difference_kernel(w, omega, p, p - eps, spec);
    return eps * std::pow(d, -eps) * est.value;
}

}  // namespace fracsob::limits
