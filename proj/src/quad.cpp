#include "fracsob/quad.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fracsob::quad {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

double sphere_area_local(int n) {
    return 2.0 * std::exp(0.5 * n * std::log(kPi) - std::lgamma(0.5 * n));
}

[[noreturn]] void throw_nonfinite(std::span<const double> x, double value) {
    std::ostringstream os;
    os << "integrand returned non-finite value " << value << " at (";
    for (std::size_t i = 0; i < x.size(); ++i)
        os << (i ? ", " : "") << x[i];
    os << ")";
    throw std::runtime_error(os.str());
}

double checked_eval(const Integrand& g, std::span<const double> x) {
    const double v = g(x);
    if (!std::isfinite(v))
        throw_nonfinite(x, v);
    return v;
}

// Neumaier-compensated accumulator: deterministic and safe for long
// Monte Carlo reductions.
struct Accum {
    double sum = 0.0, comp = 0.0;
    void add(double term) {
        const double t = sum + term;
        comp += (std::abs(sum) >= std::abs(term)) ? (sum - t) + term : (term - t) + sum;
        sum = t;
    }
    double get() const { return sum + comp; }
};

// ---- tensor Gauss-Legendre over boxes and balls ----

struct TensorResult {
    double value = 0.0;
    long long cost = 0;
};

// iterate the tensor product of one GL rule over a box
TensorResult tensor_box(const Integrand& g, std::span<const double> lo,
                        std::span<const double> hi, int order) {
    const auto& rule = gauss_legendre(order);
    const int n = static_cast<int>(lo.size());
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    std::vector<double> x(static_cast<std::size_t>(n));
    TensorResult res;
    Accum acc;
    const std::size_t m = rule.nodes.size();
    while (true) {
        double w = 1.0;
        for (int i = 0; i < n; ++i) {
            const double mid = 0.5 * (lo[i] + hi[i]);
            const double half = 0.5 * (hi[i] - lo[i]);
            x[static_cast<std::size_t>(i)] = mid + half * rule.nodes[idx[static_cast<std::size_t>(i)]];
            w *= half * rule.weights[idx[static_cast<std::size_t>(i)]];
        }
        acc.add(w * checked_eval(g, x));
        ++res.cost;
        int axis = 0;
        while (axis < n && ++idx[static_cast<std::size_t>(axis)] == m) {
            idx[static_cast<std::size_t>(axis)] = 0;
            ++axis;
        }
        if (axis == n)
            break;
    }
    res.value = acc.get();
    return res;
}

TensorResult tensor_ball(const Integrand& g, const domains::Domain& omega, int order) {
    const int n = omega.dim();
    const double R = omega.radius();
    const auto& c = omega.center();
    const auto& rr = gauss_legendre(order);
    TensorResult res;
    Accum acc;
    if (n == 1) {
        std::vector<double> lo{c[0] - R}, hi{c[0] + R};
        return tensor_box(g, lo, hi, order);
    }
    if (n == 2) {
        const int ntheta = std::max(8, 2 * order);
        std::vector<double> x(2);
        for (std::size_t i = 0; i < rr.nodes.size(); ++i) {
            const double rho = 0.5 * R * (rr.nodes[i] + 1.0);
            const double wr = 0.5 * R * rr.weights[i] * rho;
            for (int j = 0; j < ntheta; ++j) {
                const double th = 2.0 * kPi * (j + 0.5) / ntheta;
                x[0] = c[0] + rho * std::cos(th);
                x[1] = c[1] + rho * std::sin(th);
                acc.add(wr * (2.0 * kPi / ntheta) * checked_eval(g, x));
                ++res.cost;
            }
        }
        res.value = acc.get();
        return res;
    }
    if (n == 3) {
        const int nphi = std::max(8, 2 * order);
        std::vector<double> x(3);
        for (std::size_t i = 0; i < rr.nodes.size(); ++i) {
            const double rho = 0.5 * R * (rr.nodes[i] + 1.0);
            const double wr = 0.5 * R * rr.weights[i] * rho * rho;
            for (std::size_t ju = 0; ju < rr.nodes.size(); ++ju) {
                const double cu = rr.nodes[ju];  // cos(theta)
                const double su = std::sqrt(std::max(0.0, 1.0 - cu * cu));
                const double wu = rr.weights[ju];
                for (int jp = 0; jp < nphi; ++jp) {
                    const double ph = 2.0 * kPi * (jp + 0.5) / nphi;
                    x[0] = c[0] + rho * su * std::cos(ph);
                    x[1] = c[1] + rho * su * std::sin(ph);
                    x[2] = c[2] + rho * cu;
                    acc.add(wr * wu * (2.0 * kPi / nphi) * checked_eval(g, x));
                    ++res.cost;
                }
            }
        }
        res.value = acc.get();
        return res;
    }
    throw std::invalid_argument("integrate_nd: deterministic ball quadrature supports n <= 3");
}

TensorResult tensor_domain(const Integrand& g, const domains::Domain& omega, int order) {
    if (omega.kind() == domains::Kind::ball)
        return tensor_ball(g, omega, order);
    const auto [lo, hi] = omega.bounding_box();
    return tensor_box(g, lo, hi, order);
}

Estimate gauss_tensor_nd(const Integrand& g, const domains::Domain& omega, const QuadSpec& spec) {
    int order = static_cast<int>(std::clamp<long long>(spec.order_or_samples, 2, 96));
    Estimate est;
    TensorResult fine = tensor_domain(g, omega, order);
    TensorResult coarse = tensor_domain(g, omega, std::max(2, order / 2));
    est.cost = fine.cost + coarse.cost;
    double err = std::abs(fine.value - coarse.value);
    // escalate while the nested-rule difference misses rel_tol
    for (int round = 0; round < 3 && err > spec.rel_tol * std::abs(fine.value); ++round) {
        const int next = std::min(96, order + order / 2);
        if (next == order)
            break;
        coarse = fine;
        order = next;
        fine = tensor_domain(g, omega, order);
        est.cost += fine.cost;
        err = std::abs(fine.value - coarse.value);
    }
    est.value = fine.value;
    est.err_abs = err;
    return est;
}

// ---- 1-D adaptive Gauss-Kronrod (G7K15) ----

struct GK {
    double value, err;
};

GK gk15(const std::function<double(double)>& f, double a, double b, long long& cost) {
    static const double xgk[8] = {
        0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
        0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
    static const double wgk[8] = {
        0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
        0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
    static const double wg[4] = {
        0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    const double f0 = f(mid);
    ++cost;
    double k15 = wgk[7] * f0;
    double g7 = wg[3] * f0;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * xgk[i];
        const double fi = f(mid + dx) + f(mid - dx);
        cost += 2;
        k15 += wgk[i] * fi;
        if (i % 2 == 1)
            g7 += wg[i / 2] * fi;
    }
    k15 *= half;
    g7 *= half;
    double err = 200.0 * std::abs(k15 - g7);
    err *= std::sqrt(std::min(err, 1.0));
    return {k15, err};
}

Estimate adaptive_1d(const std::function<double(double)>& f, double a, double b,
                     const QuadSpec& spec) {
    struct Interval {
        double a, b, value, err;
    };
    Estimate est;
    auto fchecked = [&](double x) {
        const double v = f(x);
        if (!std::isfinite(v)) {
            const double pt[1] = {x};
            throw_nonfinite(std::span<const double>(pt, 1), v);
        }
        return v;
    };
    std::vector<Interval> intervals;
    GK whole = gk15(fchecked, a, b, est.cost);
    intervals.push_back({a, b, whole.value, whole.err});
    const int max_intervals = 4000;
    while (static_cast<int>(intervals.size()) < max_intervals) {
        double total = 0.0, toterr = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < intervals.size(); ++i) {
            total += intervals[i].value;
            toterr += intervals[i].err;
            if (intervals[i].err > intervals[worst].err)
                worst = i;
        }
        if (toterr <= spec.rel_tol * std::abs(total) || toterr < 1e-300)
            break;
        Interval w = intervals[worst];
        const double m = 0.5 * (w.a + w.b);
        GK left = gk15(fchecked, w.a, m, est.cost);
        GK right = gk15(fchecked, m, w.b, est.cost);
        intervals[worst] = {w.a, m, left.value, left.err};
        intervals.push_back({m, w.b, right.value, right.err});
    }
    Accum acc;
    double toterr = 0.0;
    for (const auto& iv : intervals) {
        acc.add(iv.value);
        toterr += iv.err;
    }
    est.value = acc.get();
    est.err_abs = toterr;
    return est;
}

Estimate adaptive_nd(const Integrand& g, const domains::Domain& omega, const QuadSpec& spec) {
    if (omega.dim() == 1) {
        const auto [lo, hi] = omega.bounding_box();
        auto f = [&](double x) {
            const double pt[1] = {x};
            return g(std::span<const double>(pt, 1));
        };
        return adaptive_1d(f, lo[0], hi[0], spec);
    }
    // multidimensional: order-doubling refinement of the tensor rule
    Estimate est;
    int order = std::max(6, static_cast<int>(std::min<long long>(spec.order_or_samples, 16)));
    TensorResult prev = tensor_domain(g, omega, order);
    est.cost = prev.cost;
    for (int round = 0; round < 6; ++round) {
        order = std::min(96, order + (order + 1) / 2);
        TensorResult next = tensor_domain(g, omega, order);
        est.cost += next.cost;
        const double err = std::abs(next.value - prev.value);
        prev = next;
        est.value = next.value;
        est.err_abs = err;
        if (err <= spec.rel_tol * std::abs(next.value) || order >= 96)
            break;
    }
    return est;
}

// ---- Monte Carlo over a domain ----

std::vector<double> sample_point(const domains::Domain& omega, SplitMix64& rng) {
    const int n = omega.dim();
    std::vector<double> x(static_cast<std::size_t>(n));
    if (omega.kind() == domains::Kind::ball) {
        double norm2 = 0.0;
        for (auto& xi : x) {
            xi = rng.normal();
            norm2 += xi * xi;
        }
        const double norm = std::sqrt(norm2);
        const double r = omega.radius() * std::pow(rng.uniform(), 1.0 / n);
        for (int i = 0; i < n; ++i)
            x[static_cast<std::size_t>(i)] = omega.center()[static_cast<std::size_t>(i)] +
                                             r * x[static_cast<std::size_t>(i)] / norm;
        return x;
    }
    const auto [lo, hi] = omega.bounding_box();
    for (int i = 0; i < n; ++i)
        x[static_cast<std::size_t>(i)] =
            lo[static_cast<std::size_t>(i)] +
            (hi[static_cast<std::size_t>(i)] - lo[static_cast<std::size_t>(i)]) * rng.uniform();
    return x;
}

Estimate monte_carlo_nd(const Integrand& g, const domains::Domain& omega, const QuadSpec& spec) {
    const long long N = std::max<long long>(100, spec.order_or_samples);
    SplitMix64 rng(spec.seed, 2);
    const double vol = omega.volume();
    Accum mean_acc, sq_acc;
    Estimate est;
    for (long long i = 0; i < N; ++i) {
        const auto x = sample_point(omega, rng);
        const double v = checked_eval(g, x);
        mean_acc.add(v);
        sq_acc.add(v * v);
        ++est.cost;
    }
    const double mean = mean_acc.get() / static_cast<double>(N);
    const double var = std::max(0.0, sq_acc.get() / static_cast<double>(N) - mean * mean);
    est.value = vol * mean;
    est.err_abs = vol * std::sqrt(var / static_cast<double>(N));
    return est;
}

// ---- difference-kernel double integral, deterministic path ----

struct XBox {
    std::vector<double> lo, hi;
    bool empty = false;
};

// Omega cap (Omega - h) for a box; for the truncation cube of R^n the box is
// widened so both humps of |w(x+h) - w(x)| stay covered for every |h| <= H.
XBox x_domain(const domains::Domain& omega, std::span<const double> h) {
    const auto [blo, bhi] = omega.bounding_box();
    XBox xb;
    xb.lo = blo;
    xb.hi = bhi;
    if (omega.kind() == domains::Kind::full_space) {
        for (std::size_t i = 0; i < xb.lo.size(); ++i) {
            xb.lo[i] -= std::abs(h[i]);
            xb.hi[i] += std::abs(h[i]);
        }
        return xb;
    }
    for (std::size_t i = 0; i < xb.lo.size(); ++i) {
        xb.lo[i] = std::max(blo[i], blo[i] - h[i]);
        xb.hi[i] = std::min(bhi[i], bhi[i] - h[i]);
        if (!(xb.lo[i] < xb.hi[i])) {
            xb.empty = true;
            return xb;
        }
    }
    return xb;
}

struct DirectionRule {
    std::vector<std::vector<double>> dirs;
    std::vector<double> weights;  // include any symmetry factor; sum = |S_{n-1}|
};

DirectionRule direction_rule(int n, int budget) {
    DirectionRule rule;
    if (n == 1) {
        rule.dirs.push_back({1.0});
        rule.weights.push_back(2.0);
        return rule;
    }
    if (n == 2) {
        const int m = std::max(16, 2 * budget);
        for (int j = 0; j < m; ++j) {
            const double th = kPi * (j + 0.5) / m;  // half circle, +-omega symmetry
            rule.dirs.push_back({std::cos(th), std::sin(th)});
            rule.weights.push_back(2.0 * kPi / m);
        }
        return rule;
    }
    if (n == 3) {
        const int mu = std::max(8, budget);
        const int mphi = 2 * mu;
        const auto& gl = gauss_legendre(mu);
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            const double cu = gl.nodes[i];
            const double su = std::sqrt(std::max(0.0, 1.0 - cu * cu));
            for (int j = 0; j < mphi; ++j) {
                const double ph = 2.0 * kPi * (j + 0.5) / mphi;
                rule.dirs.push_back({su * std::cos(ph), su * std::sin(ph), cu});
                rule.weights.push_back(gl.weights[i] * 2.0 * kPi / mphi);
            }
        }
        return rule;
    }
    throw std::invalid_argument(
        "integrate_difference_kernel: deterministic path supports n <= 3; use monte_carlo");
}

enum class XMode {
    difference,     // |w(x+h) - w(x)|^p
    surrogate,      // r^p |grad w(x+h/2) . dir|^p, once the difference loses digits
    gradient_only,  // |grad w(x+h/2) . dir|^p, for the graded head where r may underflow
};

struct DiffEngine {
    const DifferenceIntegrand& w;
    const domains::Domain& omega;
    double p, t;
    double H;        // radial cutoff
    double r_grad;   // below this, the difference is formed from the gradient
    long long cost = 0;

    double x_integral(double r, std::span<const double> dir, int mx, XMode mode) {
        const int n = omega.dim();
        std::vector<double> h(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            h[static_cast<std::size_t>(i)] = r * dir[static_cast<std::size_t>(i)];
        const XBox xb = x_domain(omega, h);
        if (xb.empty)
            return 0.0;
        if (omega.kind() == domains::Kind::full_space) {
            // keep the node density as the widened box grows with |h|
            const double base = 2.0 * omega.truncation_radius();
            double widest = base;
            for (std::size_t i = 0; i < xb.lo.size(); ++i)
                widest = std::max(widest, xb.hi[i] - xb.lo[i]);
            mx = std::min(320, static_cast<int>(std::ceil(mx * widest / base)));
        }
        const auto& rule = gauss_legendre(mx);
        const std::size_t m = rule.nodes.size();
        std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
        std::vector<double> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
        Accum acc;
        while (true) {
            double wt = 1.0;
            for (int i = 0; i < n; ++i) {
                const std::size_t ii = static_cast<std::size_t>(i);
                const double mid = 0.5 * (xb.lo[ii] + xb.hi[ii]);
                const double half = 0.5 * (xb.hi[ii] - xb.lo[ii]);
                x[ii] = mid + half * rule.nodes[idx[ii]];
                wt *= half * rule.weights[idx[ii]];
            }
            double contrib;
            if (mode == XMode::difference) {
                for (int i = 0; i < n; ++i)
                    y[static_cast<std::size_t>(i)] =
                        x[static_cast<std::size_t>(i)] + h[static_cast<std::size_t>(i)];
                const double diff = w.value(y) - w.value(x);
                contrib = std::pow(std::abs(diff), p);
            } else {
                for (int i = 0; i < n; ++i)
                    y[static_cast<std::size_t>(i)] =
                        x[static_cast<std::size_t>(i)] + 0.5 * h[static_cast<std::size_t>(i)];
                const double gdir = w.dir_deriv(y, dir);
                contrib = std::pow(std::abs(gdir), p);
                if (mode == XMode::surrogate)
                    contrib *= std::pow(r, p);
            }
            if (!std::isfinite(contrib))
                throw_nonfinite(x, contrib);
            acc.add(wt * contrib);
            ++cost;
            int axis = 0;
            while (axis < n && ++idx[static_cast<std::size_t>(axis)] == m) {
                idx[static_cast<std::size_t>(axis)] = 0;
                ++axis;
            }
            if (axis == n)
                break;
        }
        return acc.get();
    }

    // int_0^H r^{-1-t} Ip(r, dir) dr: dyadic panels on the macroscopic radii,
    // graded substitution r = u^{1/(p-t)} on the head, where the integrand
    // becomes gamma * int |grad w . dir|^p, bounded at u = 0.
    double radial_integral(std::span<const double> dir, int mr, int mx, int K) {
        const auto& rule = gauss_legendre(mr);
        Accum acc;
        double hi = H;
        for (int k = 0; k < K; ++k) {
            const double lo = 0.5 * hi;
            const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double r = mid + half * rule.nodes[i];
                const XMode mode = r < r_grad ? XMode::surrogate : XMode::difference;
                const double ip = x_integral(r, dir, mx, mode);
                acc.add(half * rule.weights[i] * std::pow(r, -1.0 - t) * ip);
            }
            hi = lo;
        }
        const double gamma = 1.0 / (p - t);
        const double uh = std::pow(hi, p - t);
        const auto& hrule = gauss_legendre(8);
        double utop = uh;
        for (int panel = 0; panel < 5; ++panel) {
            const double ulo = (panel == 4) ? 0.0 : utop / 8.0;
            const double mid = 0.5 * (ulo + utop), half = 0.5 * (utop - ulo);
            for (std::size_t i = 0; i < hrule.nodes.size(); ++i) {
                const double u = mid + half * hrule.nodes[i];
                const double r = std::pow(u, gamma);  // may underflow; only shifts points
                acc.add(half * hrule.weights[i] * gamma *
                        x_integral(r, dir, mx, XMode::gradient_only));
            }
            utop = ulo;
        }
        return acc.get();
    }
};

// |h| > H remainder of the full-space double integral. Once the two humps of
// |w(x+h) - w(x)|^p separate, the x-integral equals 2 ||w||_p^p up to an
// exponentially small overlap, so the radial tail closes to
// |S_{n-1}| 2 ||w||_p^p H^{-t} / t. The measured gap between I_p(H) and the
// separated-humps limit goes into err_abs.
void apply_far_tail(Estimate& est, const DifferenceIntegrand& w,
                    const domains::Domain& omega, double p, double t, double H,
                    const QuadSpec& spec) {
    const int n = omega.dim();
    QuadSpec lp_spec = spec;
    lp_spec.method = Method::gauss_tensor;
    lp_spec.order_or_samples = 48;
    const Estimate lp = integrate_nd(
        [&](std::span<const double> xx) { return std::pow(std::abs(w.value(xx)), p); }, omega,
        lp_spec);
    est.cost += lp.cost;
    const double area = sphere_area_local(n);
    const double tail = area * 2.0 * lp.value * std::pow(H, -t) / t;
    est.value += tail;

    DiffEngine probe{w, omega, p, t, H, 1e-5 * H};
    std::vector<double> e1(static_cast<std::size_t>(n), 0.0);
    e1[0] = 1.0;
    const double ip_H = probe.x_integral(H, e1, 32, XMode::difference);
    est.cost += probe.cost;
    const double split_gap = std::abs(ip_H - 2.0 * lp.value) / std::max(2.0 * lp.value, 1e-300);
    est.err_abs += (split_gap + 2.0 * lp.err_abs / std::max(lp.value, 1e-300)) * tail;
}

}  // namespace

void QuadSpec::validate() const {
    if (order_or_samples < 2)
        throw std::invalid_argument("QuadSpec: order_or_samples must be >= 2");
    if (!(rel_tol > 0.0 && rel_tol <= 0.1))
        throw std::invalid_argument("QuadSpec: rel_tol must lie in (0, 0.1]");
}

QuadSpec QuadSpec::scaled(double factor) const {
    QuadSpec s = *this;
    const double f = std::max(1.0, factor);
    s.order_or_samples = static_cast<long long>(std::llround(order_or_samples * f));
    return s;
}

const GaussRule& gauss_legendre(int order) {
    if (order < 1)
        throw std::invalid_argument("gauss_legendre: order must be >= 1");
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it != cache.end())
        return it->second;
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(order));
    rule.weights.resize(static_cast<std::size_t>(order));
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            if (order == 1)
                p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.nodes[static_cast<std::size_t>(order - 1 - i)] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(order - 1 - i)] = w;
    }
    if (order == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = 2.0;
    }
    auto [pos, inserted] = cache.emplace(order, std::move(rule));
    return pos->second;
}

SplitMix64::SplitMix64(std::uint64_t seed, std::uint64_t stream) {
    state_ = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    // decorrelate nearby (seed, stream) pairs
    next();
    next();
}

std::uint64_t SplitMix64::next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::normal() {
    if (have_cached_) {
        have_cached_ = false;
        return cached_;
    }
    double u1 = uniform();
    while (u1 <= 0.0)
        u1 = uniform();
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    cached_ = mag * std::sin(2.0 * kPi * u2);
    have_cached_ = true;
    return mag * std::cos(2.0 * kPi * u2);
}

Estimate integrate_nd(const Integrand& g, const domains::Domain& omega, const QuadSpec& spec) {
    spec.validate();
    switch (spec.method) {
        case Method::gauss_tensor:
            return gauss_tensor_nd(g, omega, spec);
        case Method::adaptive:
            return adaptive_nd(g, omega, spec);
        case Method::monte_carlo:
            return monte_carlo_nd(g, omega, spec);
        case Method::polar_singular:
            throw std::invalid_argument(
                "integrate_nd: polar_singular applies to the difference kernel only");
    }
    throw std::logic_error("integrate_nd: bad method");
}

Estimate integrate_difference_kernel(const DifferenceIntegrand& w,
                                     const domains::Domain& omega,
                                     double p, double t, const QuadSpec& spec) {
    spec.validate();
    if (p < 1.0)
        throw std::domain_error("integrate_difference_kernel: requires p >= 1");
    if (!(t >= 0.0 && t < p))
        throw std::domain_error("integrate_difference_kernel: requires 0 <= t < p");
    if (w.dim != omega.dim())
        throw std::invalid_argument("integrate_difference_kernel: dimension mismatch");
    const int n = omega.dim();
    const bool bounded = omega.bounded();
    if (!bounded && t <= 0.0)
        throw std::domain_error("integrate_difference_kernel: t = 0 needs a bounded domain");
    const double H = bounded ? omega.diameter() : 2.0 * omega.truncation_radius();

    if (spec.method == Method::monte_carlo || omega.kind() == domains::Kind::ball || n > 3) {
        // graded polar sampling: u uniform in (0, H^{p-t}], omega uniform on
        // the sphere, x uniform in Omega (or in the |h|-widened truncation
        // slab), antithetic +-omega
        const long long N = std::max<long long>(1000, spec.order_or_samples);
        SplitMix64 rng(spec.seed, 1);
        const double gamma = 1.0 / (p - t);
        const double u_max = std::pow(H, p - t);
        const double area = sphere_area_local(n);
        const double r_grad = 1e-5 * H;
        Accum mean_acc, sq_acc;
        Estimate est;
        std::vector<double> x(static_cast<std::size_t>(n)), dir(static_cast<std::size_t>(n)),
            y(static_cast<std::size_t>(n)), mid(static_cast<std::size_t>(n));
        for (long long i = 0; i < N; ++i) {
            const double u = u_max * (1.0 - rng.uniform());
            const double r = std::pow(u, gamma);
            if (n == 1) {
                dir[0] = 1.0;
            } else {
                double norm2 = 0.0;
                for (auto& d : dir) {
                    d = rng.normal();
                    norm2 += d * d;
                }
                const double norm = std::sqrt(norm2);
                for (auto& d : dir)
                    d /= norm;
            }
            double vol_x;
            if (bounded) {
                x = sample_point(omega, rng);
                vol_x = omega.volume();
            } else {
                const double R = omega.truncation_radius();
                vol_x = 1.0;
                for (int k = 0; k < n; ++k) {
                    const std::size_t kk = static_cast<std::size_t>(k);
                    const double half = R + r * std::abs(dir[kk]);
                    x[kk] = half * (2.0 * rng.uniform() - 1.0);
                    vol_x *= 2.0 * half;
                }
            }
            double f_pair = 0.0;
            for (int s = 0; s < 2; ++s) {
                const double sgn = s ? -1.0 : 1.0;
                bool inside = true;
                for (int k = 0; k < n; ++k) {
                    const std::size_t kk = static_cast<std::size_t>(k);
                    y[kk] = x[kk] + sgn * r * dir[kk];
                }
                if (bounded)
                    inside = omega.contains(y);
                if (!inside)
                    continue;
                double contrib;
                if (r < r_grad) {
                    for (int k = 0; k < n; ++k) {
                        const std::size_t kk = static_cast<std::size_t>(k);
                        mid[kk] = x[kk] + 0.5 * sgn * r * dir[kk];
                    }
                    const double gd = w.dir_deriv(mid, dir);
                    // gamma u^{-gamma t - 1} r^p |g|^p = gamma u^{gamma(p-t)-1} |g|^p
                    contrib = gamma * std::pow(std::abs(gd), p);
                    est.cost += 1;
                } else {
                    const double diff = w.value(y) - w.value(x);
                    contrib = gamma * std::pow(u, -gamma * t - 1.0) *
                              std::pow(std::abs(diff), p);
                    est.cost += 2;
                }
                if (!std::isfinite(contrib))
                    throw_nonfinite(y, contrib);
                f_pair += 0.5 * contrib;
            }
            const double sample = vol_x * f_pair;
            mean_acc.add(sample);
            sq_acc.add(sample * sample);
        }
        const double mean = mean_acc.get() / static_cast<double>(N);
        const double var =
            std::max(0.0, sq_acc.get() / static_cast<double>(N) - mean * mean);
        const double scale = u_max * area;
        est.value = scale * mean;
        est.err_abs = scale * std::sqrt(var / static_cast<double>(N));
        if (!bounded)
            apply_far_tail(est, w, omega, p, t, H, spec);
        return est;
    }

    // deterministic polar scheme
    const int base = static_cast<int>(std::clamp<long long>(spec.order_or_samples, 2, 64));
    const int mr = std::clamp(base, 4, 48);
    const int mx = (n == 1) ? std::clamp(4 * base, 16, 256)
                            : (n == 2 ? std::clamp(2 * base, 12, 64) : std::clamp(base, 8, 32));
    const int K = 20;

    DiffEngine eng{w, omega, p, t, H, 1e-5 * H};

    auto run = [&](int mr_, int mx_, int K_, int dir_budget) {
        const DirectionRule rule = direction_rule(n, dir_budget);
        Accum acc;
        for (std::size_t d = 0; d < rule.dirs.size(); ++d)
            acc.add(rule.weights[d] * eng.radial_integral(rule.dirs[d], mr_, mx_, K_));
        return acc.get();
    };

    Estimate est;
    double fine = run(mr, mx, K, base);
    double coarse = run(std::max(4, mr / 2), std::max(8, mx / 2), K - 6, std::max(2, base / 2));
    double err = std::abs(fine - coarse);
    // escalate once or twice if the two resolutions disagree beyond rel_tol
    int mr_cur = mr, mx_cur = mx;
    for (int round = 0; round < 2 && err > spec.rel_tol * std::abs(fine); ++round) {
        coarse = fine;
        mr_cur = std::min(48, mr_cur + mr_cur / 2);
        mx_cur = std::min(n == 1 ? 256 : 64, mx_cur + mx_cur / 2);
        fine = run(mr_cur, mx_cur, K, base);
        err = std::abs(fine - coarse);
    }
    est.value = fine;
    est.err_abs = err;
    est.cost = eng.cost;
    if (!bounded)
        apply_far_tail(est, w, omega, p, t, H, spec);
    return est;
}

}  // namespace fracsob::quad
