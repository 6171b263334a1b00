#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fracsob::domains {

enum class Kind { full_space, box, ball };

/// Integration domain: all of R^n (with a truncation radius for quadrature),
/// an axis-aligned box, or a Euclidean ball. Immutable.
class Domain {
public:
    static Domain full_space(int n, double truncation_radius = 8.0);
    static Domain box(std::vector<double> lo, std::vector<double> hi);
    static Domain ball(std::vector<double> center, double radius);

    Kind kind() const { return kind_; }
    int dim() const { return n_; }
    bool bounded() const { return kind_ != Kind::full_space; }

    /// Euclidean diameter; throws std::domain_error for full_space.
    double diameter() const;

    /// Lebesgue measure (box/ball) or of the truncation cube (full_space).
    double volume() const;

    double truncation_radius() const;

    bool contains(std::span<const double> x) const;

    const std::vector<double>& lo() const { return lo_; }
    const std::vector<double>& hi() const { return hi_; }
    const std::vector<double>& center() const { return center_; }
    double radius() const { return radius_; }

    /// Smallest axis-aligned box covering the domain (truncation cube for
    /// full_space).
    std::pair<std::vector<double>, std::vector<double>> bounding_box() const;

    /// Rescaled copy Omega_hat = Omega / diameter (unit diameter) together
    /// with the scale factor R = diameter(). Bounded domains only.
    std::pair<Domain, double> scale_map() const;

    /// Literal syntax: "box:lo,hi[;lo,hi...]", "ball:c1[,c2...];r", "rn:R"
    /// (dimension of "rn" supplied separately).
    static Domain parse(const std::string& text, int full_space_dim = 1);
    std::string to_string() const;

private:
    Domain() = default;
    Kind kind_ = Kind::box;
    int n_ = 1;
    std::vector<double> lo_, hi_;       // box
    std::vector<double> center_;        // ball
    double radius_ = 0.0;               // ball
    double truncation_radius_ = 8.0;    // full_space
};

}  // namespace fracsob::domains
