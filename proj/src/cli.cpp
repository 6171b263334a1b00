#include "fracsob/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "fracsob/limits.hpp"
#include "fracsob/report.hpp"
#include "fracsob/seminorms.hpp"
#include "fracsob/specfun.hpp"
#include "fracsob/spectral.hpp"
#include "fracsob/suite.hpp"

namespace fracsob::cli {

namespace {

using domains::Domain;
using funcspace::TestFunction;
using quad::QuadSpec;
using specfun::LimitDirection;

struct CommonOpts {
    std::string format = "json";
    std::string out_path;
    std::uint64_t seed = 42;
    bool no_timestamp = false;
    long long order = 16;
    double rel_tol = 1e-6;
    std::string method = "gauss";
    std::optional<double> tol;  // enforced when present; exit 1 on violation
    int dim = 1;

    QuadSpec spec() const {
        QuadSpec s;
        if (method == "gauss")
            s.method = quad::Method::gauss_tensor;
        else if (method == "adaptive")
            s.method = quad::Method::adaptive;
        else if (method == "mc")
            s.method = quad::Method::monte_carlo;
        else
            throw CLI::ValidationError("--method", "expected gauss|adaptive|mc");
        s.order_or_samples = order;
        s.seed = seed;
        s.rel_tol = rel_tol;
        return s;
    }
};

void add_common(CLI::App* app, CommonOpts& opts) {
    app->add_option("--format", opts.format, "report format: json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app->add_option("--out", opts.out_path, "write the report to this file (default stdout)");
    app->add_option("--seed", opts.seed, "random seed for Monte Carlo paths");
    app->add_flag("--no-timestamp", opts.no_timestamp, "omit timestamps (reproducible bytes)");
    app->add_option("--order", opts.order, "quadrature order / Monte Carlo samples");
    app->add_option("--rel-tol", opts.rel_tol, "quadrature relative tolerance");
    app->add_option("--method", opts.method, "quadrature method: gauss|adaptive|mc");
    app->add_option("--tol", opts.tol, "fail (exit 1) if the reported rel_err exceeds this");
    app->add_option("--n", opts.dim, "space dimension for rn: domains and gauss shorthand");
}

int emit(const report::Report& rep, const CommonOpts& opts, std::ostream& out,
         std::ostream& err) {
    const std::string text = opts.format == "csv" ? rep.to_csv() : rep.to_json();
    if (!opts.out_path.empty()) {
        std::ofstream file(opts.out_path);
        if (!file) {
            err << "cannot open output file: " << opts.out_path << "\n";
            return 2;
        }
        file << text;
        return 0;
    }
    out << text;
    return 0;
}

void set_config(report::Report& rep, const CommonOpts& opts) {
    rep.with_timestamp = !opts.no_timestamp;
    rep.set_config("seed", static_cast<long long>(opts.seed));
    rep.set_config("order", opts.order);
    rep.set_config("rel_tol", opts.rel_tol);
    rep.set_config("method", opts.method);
    rep.set_config("format", opts.format);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"fracsob: fractional Sobolev semi-norms, their constants, and limit studies"};
    app.require_subcommand(1);

    CommonOpts opts;
    if (const char* env_seed = std::getenv("FRACSOB_SEED"))
        opts.seed = std::strtoull(env_seed, nullptr, 10);

    // constants
    auto* c_cmd = app.add_subcommand("constants", "closed-form constants with oracles");
    add_common(c_cmd, opts);
    bool want_K = false, want_M = false, want_G = false, want_lambda = false, want_limits = false;
    double c_p = 2.0, c_sigma = 0.5;
    c_cmd->add_flag("--K", want_K, "K_{p,n} with the sphere-quadrature oracle");
    c_cmd->add_flag("--M", want_M, "M_sigma with the line-quadrature oracle");
    c_cmd->add_flag("--G", want_G, "G_{sigma,n} with the K*M product oracle");
    c_cmd->add_flag("--lambda", want_lambda, "normalization factor lambda_{sigma,p}");
    c_cmd->add_flag("--limits", want_limits, "endpoint limit constants");
    c_cmd->add_option("--p", c_p, "exponent p");
    c_cmd->add_option("--sigma", c_sigma, "fractional order sigma");

    // seminorm
    auto* s_cmd = app.add_subcommand("seminorm", "evaluate one semi-norm");
    add_common(s_cmd, opts);
    std::string s_fn = "gauss", s_domain = "rn:8", s_kind = "auto";
    double s_r = 0.5, s_p = 2.0;
    s_cmd->add_option("--fn", s_fn, "catalog function, e.g. gauss, affine:0,1, gaussian:0.5");
    s_cmd->add_option("--domain", s_domain, "domain literal: box:0,1  ball:0;1  rn:8");
    s_cmd->add_option("--r", s_r, "order r = l + sigma");
    s_cmd->add_option("--p", s_p, "exponent p");
    s_cmd->add_option("--kind", s_kind,
                      "auto|integer|gradient|gagliardo|dini|normalized-lambda|normalized-1ms")
        ->check(CLI::IsMember({"auto", "integer", "gradient", "gagliardo", "dini",
                               "normalized-lambda", "normalized-1ms"}));

    // limit
    auto* l_cmd = app.add_subcommand("limit", "sigma-sweep limit study");
    add_common(l_cmd, opts);
    std::string l_fn = "affine:0,1", l_domain = "box:0,1", l_dir = "to_one", l_extrap = "richardson";
    double l_p = 2.0;
    int l_k = -1, l_l = 0;
    std::vector<double> l_sigmas;
    l_cmd->add_option("--fn", l_fn, "catalog function");
    l_cmd->add_option("--domain", l_domain, "domain literal");
    l_cmd->add_option("--p", l_p, "exponent p");
    l_cmd->add_option("--l", l_l, "integer part l of the order");
    l_cmd->add_option("--dir", l_dir, "to_zero|to_one")
        ->check(CLI::IsMember({"to_zero", "to_one"}));
    l_cmd->add_option("--k", l_k, "prefactor exponent k (default: the valid one)");
    l_cmd->add_option("--sigmas", l_sigmas, "explicit sigma sweep (default 2^-j ladder)");
    l_cmd->add_option("--extrapolation", l_extrap, "none|linear|richardson")
        ->check(CLI::IsMember({"none", "linear", "richardson"}));

    // dini
    auto* d_cmd = app.add_subcommand("dini", "Dini semi-norm, both routes");
    add_common(d_cmd, opts);
    std::string d_fn = "affine:0,1", d_domain = "box:0,1";
    double d_p = 2.0;
    int d_l = 0;
    d_cmd->add_option("--fn", d_fn, "catalog function");
    d_cmd->add_option("--domain", d_domain, "bounded domain literal");
    d_cmd->add_option("--p", d_p, "exponent p");
    d_cmd->add_option("--l", d_l, "derivative order l");

    // spectral
    auto* sp_cmd = app.add_subcommand("spectral", "p=2 spectral energies and identities");
    add_common(sp_cmd, opts);
    std::string sp_fn = "gauss";
    std::optional<double> sp_energy_r, sp_identity_sigma, sp_member_r, sp_equiv_sigma;
    std::vector<double> sp_beppo;
    int sp_l = 0;
    sp_cmd->add_option("--fn", sp_fn, "catalog function");
    sp_cmd->add_option("--energy", sp_energy_r, "weighted energy at this r");
    sp_cmd->add_option("--identity", sp_identity_sigma,
                       "compare direct Gagliardo vs the spectral route at this sigma");
    sp_cmd->add_option("--membership", sp_member_r, "H~^r membership verdict at this r");
    sp_cmd->add_option("--beppo", sp_beppo, "Beppo-Levi split: m s")->expected(2);
    sp_cmd->add_option("--equivalence", sp_equiv_sigma, "equivalence ratio at this sigma");
    sp_cmd->add_option("--l", sp_l, "integer order l for --equivalence");

    // suite
    auto* su_cmd = app.add_subcommand("suite", "run every acceptance criterion");
    add_common(su_cmd, opts);

    std::vector<std::string> argv(args);
    try {
        std::vector<const char*> cargs;
        cargs.push_back("fracsob");
        for (const auto& a : argv)
            cargs.push_back(a.c_str());
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        report::Report rep;
        bool tolerance_failed = false;

        if (c_cmd->parsed()) {
            rep.command = "constants";
            set_config(rep, opts);
            if (!(want_K || want_M || want_G || want_lambda || want_limits))
                want_K = want_M = want_G = want_lambda = want_limits = true;
            if (want_K) {
                const auto r = specfun::constant_K(c_p, opts.dim, specfun::KMethod::sphere_quadrature);
                report::Row row;
                row.set("name", "K").set("p", c_p).set("n", opts.dim).set("value", r.closed_form);
                row.set("oracle", *r.oracle).set("oracle_rel_err", *r.rel_err);
                rep.rows.push_back(std::move(row));
                if (opts.tol && *r.rel_err > *opts.tol)
                    tolerance_failed = true;
            }
            if (want_M) {
                const auto r = specfun::constant_M(c_sigma, specfun::MMethod::line_quadrature);
                report::Row row;
                row.set("name", "M").set("sigma", c_sigma).set("value", r.closed_form);
                row.set("oracle", *r.oracle).set("oracle_rel_err", *r.rel_err);
                rep.rows.push_back(std::move(row));
                if (opts.tol && *r.rel_err > *opts.tol)
                    tolerance_failed = true;
            }
            if (want_G) {
                const auto r = specfun::constant_G(c_sigma, opts.dim);
                report::Row row;
                row.set("name", "G").set("sigma", c_sigma).set("n", opts.dim);
                row.set("value", r.closed_form).set("oracle", *r.oracle);
                row.set("oracle_rel_err", *r.rel_err);
                rep.rows.push_back(std::move(row));
                if (opts.tol && *r.rel_err > *opts.tol)
                    tolerance_failed = true;
            }
            if (want_lambda) {
                report::Row row;
                row.set("name", "lambda").set("sigma", c_sigma).set("p", c_p);
                row.set("value", specfun::lambda_norm(c_sigma, c_p));
                rep.rows.push_back(std::move(row));
            }
            if (want_limits) {
                report::Row row;
                row.set("name", "limit_to_one").set("p", c_p).set("n", opts.dim);
                row.set("value", specfun::limit_constant(LimitDirection::to_one, c_p, opts.dim));
                rep.rows.push_back(std::move(row));
                report::Row row2;
                row2.set("name", "limit_to_zero").set("p", c_p).set("n", opts.dim);
                row2.set("value", specfun::limit_constant(LimitDirection::to_zero, c_p, opts.dim));
                rep.rows.push_back(std::move(row2));
            }
        } else if (s_cmd->parsed()) {
            rep.command = "seminorm";
            set_config(rep, opts);
            const Domain omega = Domain::parse(s_domain, opts.dim);
            const TestFunction fn = TestFunction::parse(s_fn, omega.dim());
            const int l = static_cast<int>(std::floor(s_r));
            const double sigma = s_r - l;
            std::string kind = s_kind;
            if (kind == "auto")
                kind = sigma > 0.0 ? "gagliardo" : "integer";
            seminorms::SeminormResult res;
            if (kind == "integer")
                res = seminorms::integer_seminorm(fn, l, s_p, omega, opts.spec());
            else if (kind == "gradient")
                res = seminorms::gradient_seminorm(fn, l, s_p, omega, opts.spec());
            else if (kind == "gagliardo")
                res = seminorms::gagliardo_seminorm(fn, {l, sigma, s_p}, omega, opts.spec());
            else if (kind == "dini")
                res = seminorms::dini_seminorm(fn, l, s_p, omega, opts.spec());
            else
                res = seminorms::normalized_seminorm(
                    fn, {l, sigma, s_p}, omega,
                    kind == "normalized-lambda" ? seminorms::Normalization::lambda
                                                : seminorms::Normalization::one_minus_sigma,
                    opts.spec());
            report::Row row;
            row.set("fn", fn.describe()).set("domain", omega.to_string()).set("kind", kind);
            row.set("r", s_r).set("p", s_p).set("value_p", res.value_p).set("value", res.value);
            row.set("err_abs", res.estimate.err_abs).set("cost", res.estimate.cost);
            rep.rows.push_back(std::move(row));
        } else if (l_cmd->parsed()) {
            rep.command = "limit";
            set_config(rep, opts);
            const Domain omega = Domain::parse(l_domain, opts.dim);
            const TestFunction fn = TestFunction::parse(l_fn, omega.dim());
            const auto dir = l_dir == "to_one" ? LimitDirection::to_one : LimitDirection::to_zero;
            if (l_k < 0)
                l_k = dir == LimitDirection::to_one ? 1 : (omega.bounded() ? 1 : 0);
            if (l_sigmas.empty())
                l_sigmas = limits::default_sigmas(dir);
            const auto extrap = l_extrap == "none"
                                    ? limits::Extrapolation::none
                                    : (l_extrap == "linear" ? limits::Extrapolation::linear
                                                            : limits::Extrapolation::richardson);
            const auto study = limits::limit_study(fn, l_l, l_p, omega, dir, l_k, l_sigmas,
                                                   opts.spec(), extrap);
            for (std::size_t i = 0; i < study.sigmas.size(); ++i) {
                report::Row row;
                row.set("sigma", study.sigmas[i]).set("value", study.values[i]);
                row.set("err_abs", study.estimates[i].err_abs);
                rep.rows.push_back(std::move(row));
            }
            report::Row sum;
            sum.set("extrapolated", study.extrapolated).set("reference", study.reference);
            sum.set("rel_err", study.rel_err);
            rep.rows.push_back(std::move(sum));
            if (opts.tol && study.rel_err > *opts.tol)
                tolerance_failed = true;
        } else if (d_cmd->parsed()) {
            rep.command = "dini";
            set_config(rep, opts);
            const Domain omega = Domain::parse(d_domain, opts.dim);
            const TestFunction fn = TestFunction::parse(d_fn, omega.dim());
            const auto direct = seminorms::dini_seminorm(fn, d_l, d_p, omega, opts.spec());
            const double via = seminorms::dini_via_modulus_p(fn, d_l, d_p, omega, opts.spec());
            const double gap = direct.value_p != 0.0
                                   ? std::abs(direct.value_p - via) / std::abs(direct.value_p)
                                   : std::abs(via);
            report::Row row;
            row.set("fn", fn.describe()).set("domain", omega.to_string()).set("l", d_l);
            row.set("p", d_p).set("direct_p", direct.value_p).set("via_modulus_p", via);
            row.set("rel_gap", gap);
            rep.rows.push_back(std::move(row));
            if (opts.tol && gap > *opts.tol)
                tolerance_failed = true;
        } else if (sp_cmd->parsed()) {
            rep.command = "spectral";
            set_config(rep, opts);
            const TestFunction fn = TestFunction::parse(sp_fn, opts.dim);
            if (sp_energy_r) {
                const auto e = spectral::spectral_energy(fn, *sp_energy_r, opts.spec());
                report::Row row;
                row.set("what", "energy").set("r", *sp_energy_r).set("value", e.value);
                row.set("method", e.method == spectral::EnergyMethod::closed_form ? "closed_form"
                                                                                  : "quadrature");
                rep.rows.push_back(std::move(row));
            }
            if (sp_identity_sigma) {
                const Domain omega = Domain::full_space(fn.dim(), 8.0);
                const auto direct =
                    seminorms::gagliardo_seminorm(fn, {0, *sp_identity_sigma, 2.0}, omega, opts.spec());
                const double via = spectral::gagliardo_via_spectral(fn, *sp_identity_sigma, opts.spec());
                const double gap = std::abs(direct.value_p - via) / std::abs(via);
                report::Row row;
                row.set("what", "identity").set("sigma", *sp_identity_sigma);
                row.set("direct", direct.value_p).set("spectral", via).set("rel_err", gap);
                rep.rows.push_back(std::move(row));
                if (opts.tol && gap > *opts.tol)
                    tolerance_failed = true;
            }
            if (sp_member_r) {
                const auto v = spectral::membership_htilde(fn, *sp_member_r);
                report::Row row;
                row.set("what", "membership").set("r", *sp_member_r).set("finite", v.finite);
                row.set("value", v.value).set("doubling_gap", v.doubling_gap);
                rep.rows.push_back(std::move(row));
            }
            if (!sp_beppo.empty()) {
                const auto v = spectral::membership_beppo_levi(
                    fn, static_cast<int>(sp_beppo[0]), sp_beppo[1]);
                for (const auto& e : v.entries) {
                    report::Row row;
                    row.set("what", "beppo_levi");
                    std::string alpha;
                    for (int i = 0; i < e.alpha.dim(); ++i)
                        alpha += (i ? "," : "") + std::to_string(e.alpha[i]);
                    row.set("alpha", alpha).set("value", e.value).set("finite", e.finite);
                    rep.rows.push_back(std::move(row));
                }
                report::Row row;
                row.set("what", "beppo_levi_verdict").set("finite", v.finite);
                rep.rows.push_back(std::move(row));
            }
            if (sp_equiv_sigma) {
                const auto r = spectral::equivalence_check(fn, sp_l, *sp_equiv_sigma);
                report::Row row;
                row.set("what", "equivalence").set("sigma", r.sigma).set("l", r.l);
                row.set("ratio", r.ratio).set("c1", r.c1).set("c2", r.c2).set("within", r.within);
                rep.rows.push_back(std::move(row));
                if (!r.within)
                    tolerance_failed = true;
            }
        } else if (su_cmd->parsed()) {
            rep.command = "suite";
            set_config(rep, opts);
            const auto result = suite::run_acceptance(opts.seed);
            err << suite::format_lines(result, !opts.no_timestamp);
            for (const auto& c : result.criteria) {
                for (const auto& row : c.rows) {
                    report::Row r;
                    r.set("criterion", c.id).set("name", c.name);
                    for (const auto& [k, v] : row.fields)
                        r.fields.emplace_back(k, v);
                    rep.rows.push_back(std::move(r));
                }
                report::Row summary;
                summary.set("criterion", c.id).set("name", c.name).set("summary", true);
                summary.set("pass", c.pass);
                if (!opts.no_timestamp)
                    summary.set("seconds", c.seconds);
                rep.rows.push_back(std::move(summary));
            }
            if (!result.all_pass)
                tolerance_failed = true;
        }

        const int emit_status = emit(rep, opts, out, err);
        if (emit_status != 0)
            return emit_status;
        return tolerance_failed ? 1 : 0;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace fracsob::cli
