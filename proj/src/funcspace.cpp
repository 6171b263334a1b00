#include "fracsob/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace fracsob::funcspace {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr std::complex<double> kI{0.0, 1.0};

std::uint64_t binomial_u64(int n, int k) {
    if (k < 0 || k > n)
        return 0;
    k = std::min(k, n - k);
    std::uint64_t b = 1;
    for (int i = 1; i <= k; ++i)
        b = b * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return b;
}

std::vector<double> parse_numbers(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ','))
        out.push_back(std::stod(tok));
    return out;
}

std::string join_numbers(std::span<const double> v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i)
        os << (i ? "," : "") << v[i];
    return os.str();
}

double lg(double x) { return std::lgamma(x); }

}  // namespace

MultiIndex::MultiIndex(std::vector<int> exps) : exps_(std::move(exps)) {
    if (exps_.empty())
        throw std::invalid_argument("MultiIndex: needs at least one exponent");
    for (int e : exps_)
        if (e < 0)
            throw std::invalid_argument("MultiIndex: exponents must be nonnegative");
}

int MultiIndex::order() const {
    int s = 0;
    for (int e : exps_)
        s += e;
    return s;
}

MultiIndex MultiIndex::plus(const MultiIndex& other) const {
    if (dim() != other.dim())
        throw std::invalid_argument("MultiIndex: dimension mismatch");
    std::vector<int> e(exps_);
    for (std::size_t i = 0; i < e.size(); ++i)
        e[i] += other.exps_[i];
    return MultiIndex(std::move(e));
}

std::uint64_t multinomial(const MultiIndex& alpha) {
    const int l = alpha.order();
    if (l > 20)
        throw std::domain_error("multinomial: exact only for |alpha| <= 20");
    std::uint64_t result = 1;
    int partial = 0;
    for (int i = 0; i < alpha.dim(); ++i) {
        partial += alpha[i];
        result *= binomial_u64(partial, alpha[i]);
    }
    return result;
}

std::vector<MultiIndex> multi_indices(int n, int order) {
    if (n < 1 || order < 0)
        throw std::invalid_argument("multi_indices: bad arguments");
    std::vector<MultiIndex> out;
    std::vector<int> current(static_cast<std::size_t>(n), 0);
    // lexicographic enumeration by recursion on the first coordinate
    std::function<void(int, int)> rec = [&](int axis, int remaining) {
        if (axis == n - 1) {
            current[static_cast<std::size_t>(axis)] = remaining;
            out.emplace_back(current);
            return;
        }
        for (int k = remaining; k >= 0; --k) {
            current[static_cast<std::size_t>(axis)] = k;
            rec(axis + 1, remaining - k);
        }
    };
    rec(0, order);
    return out;
}

// ---- TestFunction ----

void TestFunction::normalize() {
    std::map<std::vector<int>, std::complex<double>> merged;
    double max_abs = 0.0;
    for (const auto& t : terms_) {
        merged[t.powers] += t.coef;
    }
    for (const auto& [pw, c] : merged)
        max_abs = std::max(max_abs, std::abs(c));
    terms_.clear();
    const double cutoff = max_abs * 1e-14;
    for (auto& [pw, c] : merged)
        if (std::abs(c) > cutoff && c != 0.0)
            terms_.push_back({c, pw});
    bool freq_zero = true;
    for (double f : freq_)
        if (f != 0.0)
            freq_zero = false;
    if (freq_zero)
        freq_.assign(static_cast<std::size_t>(n_), 0.0);
}

std::complex<double> TestFunction::eval_complex(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != n_)
        throw std::invalid_argument("TestFunction: point dimension mismatch");
    double q = 0.0, phase = 0.0;
    for (int i = 0; i < n_; ++i) {
        const std::size_t ii = static_cast<std::size_t>(i);
        const double y = x[ii] - mu_[ii];
        q += y * y;
        phase += freq_[ii] * x[ii];
    }
    std::complex<double> poly = 0.0;
    for (const auto& t : terms_) {
        double mono = 1.0;
        for (int i = 0; i < n_; ++i) {
            const std::size_t ii = static_cast<std::size_t>(i);
            const double y = x[ii] - mu_[ii];
            for (int k = 0; k < t.powers[ii]; ++k)
                mono *= y;
        }
        poly += t.coef * mono;
    }
    std::complex<double> out = poly * std::exp(-width_ * q);
    if (phase != 0.0)
        out *= std::exp(kI * phase);
    return out;
}

double TestFunction::operator()(std::span<const double> x) const {
    if (!is_real())
        throw std::logic_error("TestFunction: complex-valued; use eval_complex");
    return eval_complex(x).real();
}

bool TestFunction::is_real() const {
    for (double f : freq_)
        if (f != 0.0)
            return false;
    double max_abs = 0.0, max_imag = 0.0;
    for (const auto& t : terms_) {
        max_abs = std::max(max_abs, std::abs(t.coef));
        max_imag = std::max(max_imag, std::abs(t.coef.imag()));
    }
    return max_imag <= 1e-12 * std::max(1.0, max_abs);
}

bool TestFunction::is_identically_zero() const { return terms_.empty(); }

int TestFunction::poly_degree() const {
    int deg = 0;
    for (const auto& t : terms_) {
        int d = 0;
        for (int p : t.powers)
            d += p;
        deg = std::max(deg, d);
    }
    return deg;
}

TestFunction TestFunction::axis_derivative(int axis) const {
    if (axis < 0 || axis >= n_)
        throw std::invalid_argument("TestFunction: axis out of range");
    const std::size_t ax = static_cast<std::size_t>(axis);
    TestFunction out;
    out.n_ = n_;
    out.width_ = width_;
    out.mu_ = mu_;
    out.freq_ = freq_;
    for (const auto& t : terms_) {
        // product rule on c y^e exp(-a|y|^2) exp(i kappa.x), y = x - mu
        if (t.powers[ax] > 0) {
            Term lowered{t.coef * static_cast<double>(t.powers[ax]), t.powers};
            --lowered.powers[ax];
            out.terms_.push_back(std::move(lowered));
        }
        if (width_ != 0.0) {
            Term raised{t.coef * (-2.0 * width_), t.powers};
            ++raised.powers[ax];
            out.terms_.push_back(std::move(raised));
        }
        if (freq_[ax] != 0.0)
            out.terms_.push_back({t.coef * kI * freq_[ax], t.powers});
    }
    out.normalize();
    return out;
}

TestFunction TestFunction::derivative(const MultiIndex& alpha) const {
    if (alpha.dim() != n_)
        throw std::invalid_argument("TestFunction: multi-index dimension mismatch");
    TestFunction out = *this;
    for (int axis = 0; axis < n_; ++axis)
        for (int k = 0; k < alpha[axis]; ++k)
            out = out.axis_derivative(axis);
    return out;
}

std::vector<TestFunction> TestFunction::gradient() const {
    std::vector<TestFunction> g;
    g.reserve(static_cast<std::size_t>(n_));
    for (int axis = 0; axis < n_; ++axis)
        g.push_back(axis_derivative(axis));
    return g;
}

TestFunction TestFunction::fourier_transform() const {
    if (!has_closed_fourier())
        throw std::domain_error("TestFunction: no closed-form Fourier transform (width 0)");
    const double a = width_;
    // base transform of exp(-a|y|^2): (pi/a)^{n/2} exp(-|eta|^2/(4a))
    TestFunction base;
    base.n_ = n_;
    base.width_ = 1.0 / (4.0 * a);
    base.mu_.assign(static_cast<std::size_t>(n_), 0.0);
    base.freq_.assign(static_cast<std::size_t>(n_), 0.0);
    base.terms_.push_back({std::pow(kPi / a, 0.5 * n_), std::vector<int>(static_cast<std::size_t>(n_), 0)});

    // monomial rule: FT(y^e g) = i^{|e|} d^e (FT g)
    TestFunction acc;
    acc.n_ = n_;
    acc.width_ = base.width_;
    acc.mu_ = base.mu_;
    acc.freq_ = base.freq_;
    for (const auto& t : terms_) {
        TestFunction d = base;
        int total = 0;
        for (int axis = 0; axis < n_; ++axis)
            for (int k = 0; k < t.powers[static_cast<std::size_t>(axis)]; ++k) {
                d = d.axis_derivative(axis);
                ++total;
            }
        std::complex<double> ipow = 1.0;
        for (int k = 0; k < total % 4; ++k)
            ipow *= kI;
        for (auto& dt : d.terms_)
            acc.terms_.push_back({t.coef * ipow * dt.coef, dt.powers});
    }

    // center/modulation bookkeeping: f = P(x-mu) g(x-mu) e^{i kappa.x} gives
    // fhat(xi) = e^{i mu.kappa} e^{-i mu.xi} Q(xi - kappa)
    std::complex<double> phase = 1.0;
    double mu_dot_kappa = 0.0;
    for (int i = 0; i < n_; ++i)
        mu_dot_kappa += mu_[static_cast<std::size_t>(i)] * freq_[static_cast<std::size_t>(i)];
    if (mu_dot_kappa != 0.0)
        phase = std::exp(kI * mu_dot_kappa);
    TestFunction out;
    out.n_ = n_;
    out.width_ = base.width_;
    out.mu_ = freq_;
    out.freq_.resize(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i)
        out.freq_[static_cast<std::size_t>(i)] = -mu_[static_cast<std::size_t>(i)];
    out.terms_ = std::move(acc.terms_);
    for (auto& t : out.terms_)
        t.coef *= phase;
    out.normalize();
    return out;
}

TestFunction TestFunction::conjugate() const {
    TestFunction out = *this;
    for (auto& t : out.terms_)
        t.coef = std::conj(t.coef);
    for (auto& f : out.freq_)
        f = -f;
    return out;
}

TestFunction TestFunction::multiply(const TestFunction& other) const {
    if (n_ != other.n_)
        throw std::invalid_argument("TestFunction::multiply: dimension mismatch");
    for (int i = 0; i < n_; ++i)
        if (std::abs(mu_[static_cast<std::size_t>(i)] - other.mu_[static_cast<std::size_t>(i)]) > 1e-14)
            throw std::invalid_argument("TestFunction::multiply: centers differ");
    TestFunction out;
    out.n_ = n_;
    out.width_ = width_ + other.width_;
    out.mu_ = mu_;
    out.freq_.resize(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i)
        out.freq_[static_cast<std::size_t>(i)] =
            freq_[static_cast<std::size_t>(i)] + other.freq_[static_cast<std::size_t>(i)];
    for (const auto& s : terms_)
        for (const auto& t : other.terms_) {
            Term prod{s.coef * t.coef, s.powers};
            for (std::size_t i = 0; i < prod.powers.size(); ++i)
                prod.powers[i] += t.powers[i];
            out.terms_.push_back(std::move(prod));
        }
    out.normalize();
    return out;
}

TestFunction TestFunction::scaled_argument(double s) const {
    if (s == 0.0)
        throw std::invalid_argument("TestFunction::scaled_argument: scale must be nonzero");
    TestFunction out;
    out.n_ = n_;
    out.width_ = width_ * s * s;
    out.mu_.resize(static_cast<std::size_t>(n_));
    out.freq_.resize(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
        out.mu_[static_cast<std::size_t>(i)] = mu_[static_cast<std::size_t>(i)] / s;
        out.freq_[static_cast<std::size_t>(i)] = freq_[static_cast<std::size_t>(i)] * s;
    }
    for (const auto& t : terms_) {
        int deg = 0;
        for (int p : t.powers)
            deg += p;
        out.terms_.push_back({t.coef * std::pow(s, deg), t.powers});
    }
    out.normalize();
    return out;
}

TestFunction TestFunction::gaussian(int n, double a, std::vector<double> center) {
    if (n < 1)
        throw std::invalid_argument("TestFunction::gaussian: dimension must be >= 1");
    if (!(a > 0.0))
        throw std::invalid_argument("TestFunction::gaussian: width must be positive");
    if (center.empty())
        center.assign(static_cast<std::size_t>(n), 0.0);
    if (static_cast<int>(center.size()) != n)
        throw std::invalid_argument("TestFunction::gaussian: center dimension mismatch");
    TestFunction f;
    f.n_ = n;
    f.width_ = a;
    f.mu_ = std::move(center);
    f.freq_.assign(static_cast<std::size_t>(n), 0.0);
    f.terms_.push_back({1.0, std::vector<int>(static_cast<std::size_t>(n), 0)});
    return f;
}

TestFunction TestFunction::poly_gaussian(const MultiIndex& alpha, double a) {
    if (!(a > 0.0))
        throw std::invalid_argument("TestFunction::poly_gaussian: width must be positive");
    TestFunction f;
    f.n_ = alpha.dim();
    f.width_ = a;
    f.mu_.assign(static_cast<std::size_t>(f.n_), 0.0);
    f.freq_.assign(static_cast<std::size_t>(f.n_), 0.0);
    f.terms_.push_back({1.0, alpha.exponents()});
    return f;
}

TestFunction TestFunction::affine(std::vector<double> coeffs) {
    if (coeffs.size() < 2)
        throw std::invalid_argument("TestFunction::affine: needs constant plus slopes");
    const int n = static_cast<int>(coeffs.size()) - 1;
    TestFunction f;
    f.n_ = n;
    f.width_ = 0.0;
    f.mu_.assign(static_cast<std::size_t>(n), 0.0);
    f.freq_.assign(static_cast<std::size_t>(n), 0.0);
    f.terms_.push_back({coeffs[0], std::vector<int>(static_cast<std::size_t>(n), 0)});
    for (int i = 0; i < n; ++i) {
        std::vector<int> pw(static_cast<std::size_t>(n), 0);
        pw[static_cast<std::size_t>(i)] = 1;
        f.terms_.push_back({coeffs[static_cast<std::size_t>(i) + 1], std::move(pw)});
    }
    f.normalize();
    return f;
}

TestFunction TestFunction::constant(int n, double value) {
    if (n < 1)
        throw std::invalid_argument("TestFunction::constant: dimension must be >= 1");
    TestFunction f;
    f.n_ = n;
    f.width_ = 0.0;
    f.mu_.assign(static_cast<std::size_t>(n), 0.0);
    f.freq_.assign(static_cast<std::size_t>(n), 0.0);
    f.terms_.push_back({value, std::vector<int>(static_cast<std::size_t>(n), 0)});
    f.normalize();
    return f;
}

std::string TestFunction::describe() const {
    // canonical catalog spellings where they apply
    if (width_ > 0.0 && terms_.size() == 1 && is_real()) {
        const auto& t = terms_[0];
        int deg = 0;
        for (int p : t.powers)
            deg += p;
        bool centered = true;
        for (double m : mu_)
            if (m != 0.0)
                centered = false;
        if (deg == 0 && t.coef == 1.0) {
            std::ostringstream os;
            os << "gaussian:" << width_;
            if (!centered)
                os << ";" << join_numbers(mu_);
            return os.str();
        }
        if (centered && t.coef == 1.0) {
            std::ostringstream os;
            os << "polygauss:" << width_ << ";";
            for (std::size_t i = 0; i < t.powers.size(); ++i)
                os << (i ? "," : "") << t.powers[i];
            return os.str();
        }
    }
    if (width_ == 0.0 && poly_degree() <= 1 && is_real()) {
        std::vector<double> coeffs(static_cast<std::size_t>(n_) + 1, 0.0);
        for (const auto& t : terms_) {
            int deg = 0, axis = -1;
            for (int i = 0; i < n_; ++i)
                if (t.powers[static_cast<std::size_t>(i)] > 0) {
                    deg += t.powers[static_cast<std::size_t>(i)];
                    axis = i;
                }
            if (deg == 0)
                coeffs[0] = t.coef.real();
            else
                coeffs[static_cast<std::size_t>(axis) + 1] = t.coef.real();
        }
        if (poly_degree() == 0 && n_ >= 1) {
            std::ostringstream os;
            os << "const:" << coeffs[0];
            return os.str();
        }
        return "affine:" + join_numbers(coeffs);
    }
    std::ostringstream os;
    os << "symbolic(n=" << n_ << ",width=" << width_ << ",terms=" << terms_.size() << ")";
    return os.str();
}

TestFunction TestFunction::parse(const std::string& text, int dim_hint) {
    if (text == "gauss")
        return gaussian(dim_hint, 0.5);
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("TestFunction::parse: expected '<name>:<params>', got '" + text + "'");
    const std::string name = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    if (name == "gaussian" || name == "gauss") {
        const auto semi = rest.find(';');
        const double a = std::stod(rest.substr(0, semi));
        if (semi == std::string::npos)
            return gaussian(dim_hint, a);
        auto center = parse_numbers(rest.substr(semi + 1));
        const int n = static_cast<int>(center.size());
        return gaussian(n, a, std::move(center));
    }
    if (name == "affine")
        return affine(parse_numbers(rest));
    if (name == "polygauss") {
        const auto semi = rest.find(';');
        if (semi == std::string::npos)
            throw std::invalid_argument("TestFunction::parse: polygauss needs 'a;e1,e2,...'");
        const double a = std::stod(rest.substr(0, semi));
        const auto nums = parse_numbers(rest.substr(semi + 1));
        std::vector<int> exps;
        for (double v : nums)
            exps.push_back(static_cast<int>(v));
        return poly_gaussian(MultiIndex(std::move(exps)), a);
    }
    if (name == "const")
        return constant(dim_hint, std::stod(rest));
    throw std::invalid_argument("TestFunction::parse: unknown catalog entry '" + name + "'");
}

// ---- closed-form registry ----

namespace {

struct GaussianView {
    double amplitude;
    double a;
};

// single constant-coefficient term under the exponential
std::optional<GaussianView> as_pure_gaussian(const TestFunction& f) {
    if (!(f.gaussian_width() > 0.0) || f.terms().size() != 1 || !f.is_real())
        return std::nullopt;
    for (int p : f.terms()[0].powers)
        if (p != 0)
            return std::nullopt;
    return GaussianView{f.terms()[0].coef.real(), f.gaussian_width()};
}

struct AffineView {
    double c0;
    std::vector<double> slope;
};

std::optional<AffineView> as_affine(const TestFunction& f) {
    if (f.gaussian_width() != 0.0 || !f.is_real() || f.poly_degree() > 1)
        return std::nullopt;
    AffineView v;
    v.c0 = 0.0;
    v.slope.assign(static_cast<std::size_t>(f.dim()), 0.0);
    for (const auto& t : f.terms()) {
        int deg = 0, axis = -1;
        for (int i = 0; i < f.dim(); ++i)
            if (t.powers[static_cast<std::size_t>(i)] > 0) {
                deg += t.powers[static_cast<std::size_t>(i)];
                axis = i;
            }
        if (deg == 0)
            v.c0 = t.coef.real();
        else
            v.slope[static_cast<std::size_t>(axis)] = t.coef.real();
    }
    return v;
}

}  // namespace

std::optional<double> closed_form_seminorm_p(const TestFunction& f, int l, double sigma,
                                             double p, const domains::Domain& omega) {
    if (l < 0 || p < 1.0)
        return std::nullopt;
    const bool dini = sigma == kDiniSigma;
    if (!dini && !(sigma >= 0.0 && sigma < 1.0))
        return std::nullopt;
    const int n = omega.dim();
    if (f.dim() != n)
        return std::nullopt;

    if (f.is_identically_zero())
        return 0.0;

    if (auto g = as_pure_gaussian(f)) {
        if (omega.kind() != domains::Kind::full_space)
            return std::nullopt;
        const double c = g->amplitude, a = g->a;
        if (dini)
            return std::nullopt;
        if (sigma == 0.0) {
            // integer semi-norms of c exp(-a|x|^2) on R^n
            if (l == 0)  // int |c|^p e^{-p a |x|^2}
                return std::pow(std::abs(c), p) * std::pow(kPi / (p * a), 0.5 * n);
            if (l == 1 && p == 2.0)  // int |grad v|^2 = 4a^2 int |x|^2 e^{-2a|x|^2}
                return c * c * a * n * std::pow(kPi / (2.0 * a), 0.5 * n);
            return std::nullopt;
        }
        if (l == 0 && p == 2.0) {
            // |v|^2_{sigma,2,R^n}: Parseval against the weight |xi|^{2 sigma};
            // the Gamma(sigma + n/2) of the radial moment cancels against the
            // kernel constant, leaving
            //   c^2 (2pi)^{-n} (pi/a)^n (2a)^{sigma+n/2} |S_{n-1}|
            //       pi^{(n+1)/2} Gamma(sigma+1/2) / (Gamma(1+2 sigma) sin(pi sigma))
            const double log_area = std::log(2.0) + 0.5 * n * std::log(kPi) - lg(0.5 * n);
            const double log_val = n * std::log(kPi / a) + log_area - std::log(2.0) +
                                   (sigma + 0.5 * n) * std::log(2.0 * a) + std::log(2.0) +
                                   0.5 * (n + 1) * std::log(kPi) + lg(sigma + 0.5) -
                                   lg(1.0 + 2.0 * sigma) - n * std::log(2.0 * kPi);
            return c * c * std::exp(log_val) / std::sin(kPi * sigma);
        }
        return std::nullopt;
    }

    if (auto v = as_affine(f)) {
        if (omega.kind() == domains::Kind::box) {
            if (f.poly_degree() == 0) {
                if (l == 0 && !dini && sigma == 0.0)
                    return std::pow(std::abs(v->c0), p) * omega.volume();
                return 0.0;  // constants are killed by every difference kernel
            }
            if (n == 1) {
                const double L = omega.hi()[0] - omega.lo()[0];
                const double s = v->slope[0];
                if (dini) {
                    if (l == 0)  // intint |s(x-y)|^p |x-y|^{-1} = |s|^p 2 L^{p+1}/(p(p+1))
                        return std::pow(std::abs(s), p) * 2.0 * std::pow(L, p + 1.0) /
                               (p * (p + 1.0));
                    return 0.0;
                }
                if (sigma == 0.0) {
                    if (l == 0 && p == 2.0) {
                        const double u1 = v->c0 + s * omega.hi()[0];
                        const double u0 = v->c0 + s * omega.lo()[0];
                        if (s == 0.0)
                            return v->c0 * v->c0 * L;
                        return (u1 * u1 * u1 - u0 * u0 * u0) / (3.0 * s);
                    }
                    if (l == 1)
                        return std::pow(std::abs(s), p) * L;
                    if (l >= 2)
                        return 0.0;
                    return std::nullopt;
                }
                if (l == 0) {
                    // intint |x-y|^{p(1-sigma)-1} over (0,L)^2
                    //   = 2 L^{p(1-sigma)+1} / (p(1-sigma) (p(1-sigma)+1))
                    const double b = p * (1.0 - sigma);
                    return std::pow(std::abs(s), p) * 2.0 * std::pow(L, b + 1.0) /
                           (b * (b + 1.0));
                }
                return 0.0;  // slope is constant; higher-order kernels vanish
            }
            // n >= 2 boxes: only the first-order integer form is registered
            if (!dini && sigma == 0.0 && l == 1) {
                double total = 0.0;
                for (double s : v->slope)
                    total += std::pow(std::abs(s), p);
                return total * omega.volume();
            }
            if ((dini || sigma > 0.0) && l >= 1)
                return 0.0;
            return std::nullopt;
        }
        return std::nullopt;
    }

    return std::nullopt;
}

}  // namespace fracsob::funcspace
