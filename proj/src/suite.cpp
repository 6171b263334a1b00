#include "fracsob/suite.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "fracsob/limits.hpp"
#include "fracsob/seminorms.hpp"
#include "fracsob/specfun.hpp"
#include "fracsob/spectral.hpp"

namespace fracsob::suite {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

using domains::Domain;
using funcspace::TestFunction;
using quad::QuadSpec;
using specfun::LimitDirection;

double rel(double value, double reference) {
    return std::abs(value - reference) / std::abs(reference);
}

struct Check {
    bool pass = true;
    std::ostringstream detail;
    std::vector<report::Row> rows;

    void record(report::Row row, bool ok, const std::string& what) {
        row.set("pass", ok);
        rows.push_back(std::move(row));
        if (!ok) {
            if (pass)
                detail << "FAILED: ";
            else
                detail << "; ";
            detail << what;
            pass = false;
        }
    }
};

QuadSpec det_spec(std::uint64_t seed) {
    QuadSpec s;
    s.method = quad::Method::gauss_tensor;
    s.order_or_samples = 16;
    s.seed = seed;
    s.rel_tol = 1e-6;
    return s;
}

// 1. K_{p,n}: closed form against the sphere quadrature, plus exact values
CriterionResult criterion_constant_K(std::uint64_t) {
    CriterionResult c;
    c.id = 1;
    c.name = "constant K closed form vs sphere quadrature";
    Check chk;
    const std::pair<double, int> grid[] = {{1, 2}, {2, 2}, {2, 3}, {3, 3}};
    for (auto [p, n] : grid) {
        const auto rep = specfun::constant_K(p, n, specfun::KMethod::sphere_quadrature);
        report::Row row;
        row.set("p", p).set("n", n).set("value", rep.closed_form);
        row.set("oracle", *rep.oracle).set("rel_err", *rep.rel_err);
        std::ostringstream what;
        what << "K(" << p << "," << n << ") quadrature gap " << *rep.rel_err;
        chk.record(std::move(row), *rep.rel_err <= 1e-6, what.str());
    }
    struct Exact {
        double p;
        int n;
        double expect;
    } exact[] = {{2, 1, 2.0}, {2, 2, kPi}, {2, 3, 4.0 * kPi / 3.0}, {1, 2, 4.0}};
    for (const auto& e : exact) {
        const double got = specfun::constant_K(e.p, e.n).closed_form;
        report::Row row;
        row.set("p", e.p).set("n", e.n).set("value", got).set("reference", e.expect);
        std::ostringstream what;
        what << "K(" << e.p << "," << e.n << ") vs exact";
        chk.record(std::move(row), std::abs(got - e.expect) <= 1e-10, what.str());
    }
    c.pass = chk.pass;
    c.detail = chk.pass ? "4 quadrature checks <= 1e-6, 4 exact values <= 1e-10"
                        : chk.detail.str();
    c.rows = std::move(chk.rows);
    return c;
}

// 2. M_sigma: closed form against the line quadrature
CriterionResult criterion_constant_M(std::uint64_t) {
    CriterionResult c;
    c.id = 2;
    c.name = "constant M closed form vs line quadrature";
    Check chk;
    for (int i = 1; i <= 9; ++i) {
        const double sigma = 0.1 * i;
        const auto rep = specfun::constant_M(sigma, specfun::MMethod::line_quadrature);
        report::Row row;
        row.set("sigma", sigma).set("value", rep.closed_form);
        row.set("oracle", *rep.oracle).set("rel_err", *rep.rel_err);
        std::ostringstream what;
        what << "M(" << sigma << ") quadrature gap " << *rep.rel_err;
        chk.record(std::move(row), *rep.rel_err <= 1e-6, what.str());
    }
    const double m_half = specfun::constant_M(0.5).closed_form;
    report::Row row;
    row.set("sigma", 0.5).set("value", m_half).set("reference", kPi);
    chk.record(std::move(row), std::abs(m_half - kPi) <= 1e-8, "M(1/2) vs pi");
    c.pass = chk.pass;
    c.detail = chk.pass ? "9 quadrature checks <= 1e-6, M(1/2) = pi to 1e-8" : chk.detail.str();
    c.rows = std::move(chk.rows);
    return c;
}

// 3. G = K M factorization and the endpoint products
CriterionResult criterion_G_factorization(std::uint64_t) {
    CriterionResult c;
    c.id = 3;
    c.name = "G factorization and endpoint limits";
    Check chk;
    for (int i = 1; i <= 9; ++i)
        for (int n = 1; n <= 4; ++n) {
            const double sigma = 0.1 * i;
            const auto rep = specfun::constant_G(sigma, n);
            report::Row row;
            row.set("sigma", sigma).set("n", n).set("value", rep.closed_form);
            row.set("oracle", *rep.oracle).set("rel_err", *rep.rel_err);
            std::ostringstream what;
            what << "G(" << sigma << "," << n << ") vs K*M gap " << *rep.rel_err;
            chk.record(std::move(row), *rep.rel_err <= 1e-12, what.str());
        }
    const double eps = 1e-6;
    for (int n = 1; n <= 4; ++n) {
        const double area = specfun::sphere_area(n);
        const double low = eps * specfun::constant_G(eps, n).closed_form;
        report::Row row0;
        row0.set("endpoint", "sigma->0").set("n", n).set("value", low).set("reference", area);
        chk.record(std::move(row0), rel(low, area) <= 1e-4, "sigma*G endpoint");
        const double target1 = 0.5 * area / n;  // pi^{n/2}/(n Gamma(n/2))
        const double high = eps * specfun::constant_G(1.0 - eps, n).closed_form;
        report::Row row1;
        row1.set("endpoint", "sigma->1").set("n", n).set("value", high).set("reference", target1);
        chk.record(std::move(row1), rel(high, target1) <= 1e-4, "(1-sigma)*G endpoint");
    }
    c.pass = chk.pass;
    c.detail = chk.pass ? "36 factorization checks <= 1e-12, 8 endpoint products <= 1e-4"
                        : chk.detail.str();
    c.rows = std::move(chk.rows);
    return c;
}

// 4. Proposition identity: direct Gagliardo quadrature vs the spectral route
CriterionResult criterion_spectral_identity(std::uint64_t seed) {
    CriterionResult c;
    c.id = 4;
    c.name = "Gagliardo vs spectral identity (unit Gaussian)";
    Check chk;
    const QuadSpec spec = det_spec(seed);
    const TestFunction g1 = TestFunction::gaussian(1, 0.5);
    const Domain r1 = Domain::full_space(1, 8.0);
    for (double sigma : {0.25, 0.5, 0.75}) {
        const double direct = seminorms::gagliardo_seminorm(g1, {0, sigma, 2.0}, r1, spec).value_p;
        const double via = spectral::gagliardo_via_spectral(g1, sigma, spec);
        report::Row row;
        row.set("n", 1).set("sigma", sigma).set("direct", direct).set("spectral", via);
        row.set("rel_err", rel(direct, via));
        std::ostringstream what;
        what << "n=1 sigma=" << sigma << " gap " << rel(direct, via);
        bool ok = rel(direct, via) <= 1e-3;
        if (sigma == 0.5)
            ok = ok && rel(direct, 2.0 * kPi) <= 1e-3;
        chk.record(std::move(row), ok, what.str());
    }
    QuadSpec mc = spec;
    mc.method = quad::Method::monte_carlo;
    mc.order_or_samples = 4000000;
    const TestFunction g2 = TestFunction::gaussian(2, 0.5);
    const Domain r2 = Domain::full_space(2, 8.0);
    const double direct2 = seminorms::gagliardo_seminorm(g2, {0, 0.5, 2.0}, r2, mc).value_p;
    const double via2 = spectral::gagliardo_via_spectral(g2, 0.5, spec);
    report::Row row;
    row.set("n", 2).set("sigma", 0.5).set("direct", direct2).set("spectral", via2);
    row.set("rel_err", rel(direct2, via2));
    std::ostringstream what;
    what << "n=2 Monte Carlo gap " << rel(direct2, via2);
    chk.record(std::move(row), rel(direct2, via2) <= 2e-2, what.str());
    c.pass = chk.pass;
    c.detail = chk.pass ? "n=1 deterministic <= 1e-3 (2pi at sigma=1/2), n=2 Monte Carlo <= 2%"
                        : chk.detail.str();
    c.rows = std::move(chk.rows);
    return c;
}

// 5. sigma -> 1- studies on (0,1) and on the line
CriterionResult criterion_bbm_limit(std::uint64_t seed) {
    CriterionResult c;
    c.id = 5;
    c.name = "sigma->1- limit studies";
    Check chk;
    const QuadSpec spec = det_spec(seed);
    const auto sigmas = limits::default_sigmas(LimitDirection::to_one);

    const TestFunction aff = TestFunction::affine({0.0, 1.0});
    const Domain unit = Domain::box({0.0}, {1.0});
    const auto study1 =
        limits::limit_study(aff, 0, 2.0, unit, LimitDirection::to_one, 1, sigmas, spec);
    report::Row row1;
    row1.set("case", "affine on (0,1)").set("extrapolated", study1.extrapolated);
    row1.set("reference", study1.reference).set("rel_err", study1.rel_err);
    chk.record(std::move(row1),
               std::abs(study1.extrapolated - 1.0) <= 1e-3 && rel(study1.reference, 1.0) <= 1e-6,
               "affine study limit vs 1");

    const TestFunction g1 = TestFunction::gaussian(1, 0.5);
    const Domain r1 = Domain::full_space(1, 8.0);
    const auto study2 =
        limits::limit_study(g1, 0, 2.0, r1, LimitDirection::to_one, 1, sigmas, spec);
    const double target = 0.5 * std::sqrt(kPi);  // limit constant 1 times |grad v|^2
    report::Row row2;
    row2.set("case", "gaussian on R").set("extrapolated", study2.extrapolated);
    row2.set("reference", target).set("rel_err", rel(study2.extrapolated, target));
    chk.record(std::move(row2), rel(study2.extrapolated, target) <= 1e-2,
               "gaussian study limit vs sqrt(pi)/2");
    c.pass = chk.pass;
    c.detail = chk.pass ? "affine extrapolates to 1 within 1e-3, gaussian to 0.8862269 within 1%"
                        : chk.detail.str();
    c.rows = std::move(chk.rows);
    return c;
}

// 6. sigma -> 0+ on the line
CriterionResult criterion_ms_limit(std::uint64_t seed) {
    CriterionResult c;
    c.id = 6;
    c.name = "sigma->0+ limit study on R";
    Check chk;
    const QuadSpec spec = det_spec(seed);
    const TestFunction g1 = TestFunction::gaussian(1, 0.5);
    const Domain r1 = Domain::full_space(1, 8.0);
    const auto study = limits::limit_study(g1, 0, 2.0, r1, LimitDirection::to_zero, 0,
                                           limits::default_sigmas(LimitDirection::to_zero), spec);
    const double target = 2.0 * std::sqrt(kPi);
    report::Row row;
    row.set("case", "gaussian on R").set("extrapolated", study.extrapolated);
    row.set("reference", target).set("rel_err", rel(study.extrapolated, target));
    chk.record(std::move(row), rel(study.extrapolated, target) <= 1e-2,
               "sigma |v|^2 limit vs 2 sqrt(pi)");
    c.pass = chk.pass;
    c.detail = chk.pass ? "extrapolated sigma.|v|^2 within 1% of 3.5449077" : chk.detail.str();
    c.rows = std::move(chk.rows);
    return c;
}

// 7. sigma -> 0+ on (0,1): Dini limit and the diameter bound
CriterionResult criterion_dini_limit(std::uint64_t seed) {
    CriterionResult c;
    c.id = 7;
    c.name = "sigma->0+ bounded-domain limit and diameter bound";
    Check chk;
    const QuadSpec spec = det_spec(seed);
    const TestFunction aff = TestFunction::affine({0.0, 1.0});
    const Domain unit = Domain::box({0.0}, {1.0});
    const auto study = limits::dini_limit_study(
        aff, 0, 2.0, unit, limits::default_sigmas(LimitDirection::to_zero), spec);
    report::Row row;
    row.set("case", "affine on (0,1)").set("extrapolated", study.extrapolated);
    row.set("reference", 1.0 / 3.0).set("abs_err", std::abs(study.extrapolated - 1.0 / 3.0));
    chk.record(std::move(row), std::abs(study.extrapolated - 1.0 / 3.0) <= 1e-3,
               "Dini limit vs 1/3");

    const auto dini = seminorms::dini_seminorm(aff, 0, 2.0, unit, spec);
    const double R = unit.diameter();
    for (double sigma : {0.1, 0.3, 0.5}) {
        const auto gag = seminorms::gagliardo_seminorm(aff, {0, sigma, 2.0}, unit, spec);
        const double bound = std::pow(R, 2.0 * sigma) * gag.value_p;
        const double margin = dini.estimate.err_abs +
                              std::pow(R, 2.0 * sigma) * gag.estimate.err_abs + 1e-12;
        report::Row brow;
        brow.set("sigma", sigma).set("dini_p", dini.value_p).set("bound_p", bound);
        std::ostringstream what;
        what << "diameter bound at sigma=" << sigma;
        chk.record(std::move(brow), dini.value_p <= bound + margin, what.str());
    }
    c.pass = chk.pass;
    c.detail = chk.pass ? "limit 1/3 within 1e-3; Dini <= R^sigma Gagliardo at 0.1/0.3/0.5"
                        : chk.detail.str();
    c.rows = std::move(chk.rows);
    return c;
}

// 8. Dini through the averaged modulus of smoothness
CriterionResult criterion_modulus_identity(std::uint64_t seed) {
    CriterionResult c;
    c.id = 8;
    c.name = "Dini semi-norm vs modulus identity";
    Check chk;
    const QuadSpec spec = det_spec(seed);
    const TestFunction aff = TestFunction::affine({0.0, 1.0});
    const Domain unit = Domain::box({0.0}, {1.0});
    const double targets[] = {1.0 / 3.0, 1.0 / 6.0};
    const double ps[] = {2.0, 3.0};
    for (int i = 0; i < 2; ++i) {
        const double direct = seminorms::dini_seminorm(aff, 0, ps[i], unit, spec).value_p;
        const double via = seminorms::dini_via_modulus_p(aff, 0, ps[i], unit, spec);
        report::Row row;
        row.set("p", ps[i]).set("direct", direct).set("via_modulus", via);
        row.set("reference", targets[i]);
        std::ostringstream what;
        what << "p=" << ps[i] << " gap " << rel(direct, via);
        chk.record(std::move(row),
                   rel(direct, via) <= 1e-3 && rel(via, targets[i]) <= 1e-3 &&
                       rel(direct, targets[i]) <= 1e-3,
                   what.str());
    }
    c.pass = chk.pass;
    c.detail = chk.pass ? "both routes within 1e-3 of 1/3 (p=2) and 1/6 (p=3)" : chk.detail.str();
    c.rows = std::move(chk.rows);
    return c;
}

// 9. split consistency of the weighted energies and membership agreement
CriterionResult criterion_split_consistency(std::uint64_t seed) {
    CriterionResult c;
    c.id = 9;
    c.name = "energy split consistency and Beppo-Levi membership";
    Check chk;
    const QuadSpec spec = det_spec(seed);
    const std::pair<int, double> splits[] = {{1, 0.5}, {2, 0.3}};
    for (int n : {1, 2}) {
        const TestFunction g = TestFunction::gaussian(n, 0.5);
        for (auto [m, s] : splits) {
            const double total = spectral::spectral_energy(g, m + s, spec).value;
            const auto table = spectral::membership_beppo_levi(g, m, s);
            double weighted = 0.0;
            for (const auto& e : table.entries)
                weighted += static_cast<double>(funcspace::multinomial(e.alpha)) * e.value;
            report::Row row;
            row.set("n", n).set("m", m).set("s", s).set("energy", total);
            row.set("weighted_sum", weighted).set("rel_err", rel(total, weighted));
            std::ostringstream what;
            what << "n=" << n << " split (" << m << "," << s << ") gap " << rel(total, weighted);
            chk.record(std::move(row), rel(total, weighted) <= 1e-8, what.str());
        }
        const auto a = spectral::membership_beppo_levi(g, 1, 0.5);
        const auto b = spectral::membership_beppo_levi(g, 0, 1.5);
        report::Row row;
        row.set("n", n).set("verdict_1_05", a.finite).set("verdict_0_15", b.finite);
        chk.record(std::move(row), a.finite == b.finite, "membership split agreement");
    }
    c.pass = chk.pass;
    c.detail = chk.pass ? "splits (1,0.5),(2,0.3) agree to 1e-8 for n=1,2; verdicts match"
                        : chk.detail.str();
    c.rows = std::move(chk.rows);
    return c;
}

// 10. scaling law under x -> R x
CriterionResult criterion_scaling_law(std::uint64_t seed) {
    CriterionResult c;
    c.id = 10;
    c.name = "scaling law of the fractional semi-norm";
    Check chk;
    const QuadSpec spec = det_spec(seed);
    const TestFunction v = TestFunction::affine({0.0, 1.0});
    const Domain omega = Domain::box({0.0}, {2.0});
    const auto [scaled, R] = omega.scale_map();
    const TestFunction vhat = v.scaled_argument(R);  // v o F, F(xhat) = R xhat
    const double sigma = 0.5, p = 2.0;
    const double lhs = seminorms::gagliardo_seminorm(v, {0, sigma, p}, omega, spec).value;
    const double rhs = std::pow(R, -sigma + omega.dim() / p) *
                       seminorms::gagliardo_seminorm(vhat, {0, sigma, p}, scaled, spec).value;
    report::Row row;
    row.set("R", R).set("lhs", lhs).set("rhs", rhs).set("rel_err", rel(lhs, rhs));
    chk.record(std::move(row), rel(lhs, rhs) <= 1e-3, "scaling law gap");
    c.pass = chk.pass;
    c.detail = chk.pass ? "|v| on (0,2) matches R^{-sigma+n/p} |v o F| on (0,1) within 1e-3"
                        : chk.detail.str();
    c.rows = std::move(chk.rows);
    return c;
}

std::vector<CriterionResult> run_core(std::uint64_t seed, double& seconds) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    std::vector<CriterionResult> out;
    CriterionResult (*runners[])(std::uint64_t) = {
        criterion_constant_K,    criterion_constant_M,       criterion_G_factorization,
        criterion_spectral_identity, criterion_bbm_limit,    criterion_ms_limit,
        criterion_dini_limit,    criterion_modulus_identity, criterion_split_consistency,
        criterion_scaling_law,
    };
    for (auto* runner : runners) {
        const auto c0 = clock::now();
        CriterionResult r = runner(seed);
        r.seconds = std::chrono::duration<double>(clock::now() - c0).count();
        out.push_back(std::move(r));
    }
    seconds = std::chrono::duration<double>(clock::now() - t0).count();
    return out;
}

}  // namespace

std::string deterministic_serialization(const SuiteResult& result) {
    report::Report rep;
    rep.command = "suite";
    rep.with_timestamp = false;
    for (const auto& c : result.criteria) {
        if (c.id == 11)
            continue;
        for (const auto& row : c.rows) {
            report::Row r;
            r.set("criterion", c.id);
            for (const auto& [k, v] : row.fields)
                r.fields.emplace_back(k, v);
            rep.rows.push_back(std::move(r));
        }
    }
    return rep.to_json();
}

SuiteResult run_acceptance(std::uint64_t seed) {
    SuiteResult result;
    double first_seconds = 0.0;
    result.criteria = run_core(seed, first_seconds);

    // 11. byte-identical re-run and the runtime budget
    CriterionResult c11;
    c11.id = 11;
    c11.name = "reproducibility and runtime";
    const auto t0 = std::chrono::steady_clock::now();
    SuiteResult second;
    double second_seconds = 0.0;
    second.criteria = run_core(seed, second_seconds);
    result.seconds = first_seconds + second_seconds;
    SuiteResult first_only;
    first_only.criteria = result.criteria;
    const std::string bytes_a = deterministic_serialization(first_only);
    const std::string bytes_b = deterministic_serialization(second);
    const bool identical = bytes_a == bytes_b;
    const bool fast = first_seconds < 300.0 && second_seconds < 300.0;
    c11.pass = identical && fast;
    report::Row row;
    row.set("identical", identical).set("bytes", static_cast<long long>(bytes_a.size()));
    row.set("pass", c11.pass);
    c11.rows.push_back(std::move(row));
    std::ostringstream detail;
    if (identical)
        detail << "two runs byte-identical (" << bytes_a.size() << " bytes)";
    else
        detail << "FAILED: reports differ between runs";
    if (!fast)
        detail << "; FAILED: runtime " << first_seconds << "s exceeds 300s";
    c11.detail = detail.str();
    c11.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.criteria.push_back(std::move(c11));

    result.all_pass = true;
    for (const auto& c : result.criteria)
        result.all_pass = result.all_pass && c.pass;
    return result;
}

std::string format_lines(const SuiteResult& result, bool with_timing) {
    std::ostringstream os;
    for (const auto& c : result.criteria) {
        os << (c.pass ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": " << c.name;
        if (with_timing) {
            os.precision(2);
            os << " (" << std::fixed << c.seconds << "s)";
            os.unsetf(std::ios::fixed);
            os.precision(6);
        }
        os << " -- " << c.detail << "\n";
    }
    return os.str();
}

}  // namespace fracsob::suite
