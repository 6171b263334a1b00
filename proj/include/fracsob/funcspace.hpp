#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracsob/domains.hpp"

namespace fracsob::funcspace {

/// Tuple of derivative exponents; |alpha| is the total order.
class MultiIndex {
public:
    explicit MultiIndex(std::vector<int> exps);
    int dim() const { return static_cast<int>(exps_.size()); }
    int order() const;
    int operator[](int i) const { return exps_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& exponents() const { return exps_; }
    MultiIndex plus(const MultiIndex& other) const;
    bool operator==(const MultiIndex& other) const { return exps_ == other.exps_; }

private:
    std::vector<int> exps_;
};

/// l! / (alpha_1! ... alpha_n!), exact in 64-bit integers for |alpha| <= 20.
std::uint64_t multinomial(const MultiIndex& alpha);

/// All multi-indices of a given order in n variables (lexicographic).
std::vector<MultiIndex> multi_indices(int n, int order);

/// Symbolic analytic function of the form
///     P(x - mu) * exp(-a |x - mu|^2) * exp(i kappa . x)
/// with P a (complex-coefficient) polynomial. The class is closed under
/// differentiation and, for a > 0, under the Fourier transform
/// vhat(xi) = int v(x) e^{-i x.xi} dx. Catalog members are real-valued;
/// transforms may be complex. Immutable.
class TestFunction {
public:
    int dim() const { return n_; }

    /// Real evaluation; throws std::logic_error if the function carries a
    /// nontrivial imaginary part (i.e. it came out of a Fourier transform).
    double operator()(std::span<const double> x) const;
    std::complex<double> eval_complex(std::span<const double> x) const;

    TestFunction axis_derivative(int axis) const;
    TestFunction derivative(const MultiIndex& alpha) const;
    std::vector<TestFunction> gradient() const;

    bool has_closed_fourier() const { return width_ > 0.0; }
    /// Exact transform under vhat(xi) = int v e^{-i x.xi} dx; throws
    /// std::domain_error when no closed form exists (width 0, i.e. pure
    /// polynomials).
    TestFunction fourier_transform() const;

    TestFunction conjugate() const;
    /// Pointwise product; both factors must share the same center.
    TestFunction multiply(const TestFunction& other) const;
    /// x -> f(s x)
    TestFunction scaled_argument(double s) const;

    bool is_identically_zero() const;
    bool is_real() const;

    double gaussian_width() const { return width_; }
    const std::vector<double>& center() const { return mu_; }
    const std::vector<double>& modulation() const { return freq_; }

    struct Term {
        std::complex<double> coef;
        std::vector<int> powers;  // of (x - center)
    };
    const std::vector<Term>& terms() const { return terms_; }
    /// Highest total degree of P.
    int poly_degree() const;

    /// Catalog text form, e.g. "gaussian:0.5", "affine:0,1"; parse accepts
    /// exactly what describe produces.
    std::string describe() const;
    static TestFunction parse(const std::string& text, int dim_hint = 1);

    // catalog constructors
    static TestFunction gaussian(int n, double a, std::vector<double> center = {});
    static TestFunction poly_gaussian(const MultiIndex& alpha, double a);
    static TestFunction affine(std::vector<double> coeffs);  // coeffs[0] + sum_i coeffs[i+1] x_i
    static TestFunction constant(int n, double value);

private:
    TestFunction() = default;
    void normalize();

    int n_ = 1;
    double width_ = 0.0;
    std::vector<double> mu_, freq_;
    std::vector<Term> terms_;
};

/// Closed-form value of the p-th power of a semi-norm, when the registry
/// knows it; std::nullopt otherwise (never an approximation). All entries
/// are independent analytic derivations evaluated with std::lgamma, not with
/// the library's own constants.
///
/// sigma = 0 requests the integer semi-norm of order l; sigma in (0,1) the
/// Gagliardo semi-norm of order l + sigma; sigma < 0 is the Dini semi-norm
/// convention.
std::optional<double> closed_form_seminorm_p(const TestFunction& f, int l, double sigma,
                                             double p, const domains::Domain& omega);

constexpr double kDiniSigma = -1.0;  // sigma argument selecting the Dini kernel

}  // namespace fracsob::funcspace
