#include "fracsob/domains.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fracsob::domains {

namespace {

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty())
            throw std::invalid_argument("domain literal: empty number in '" + text + "'");
        std::size_t used = 0;
        out.push_back(std::stod(tok, &used));
        if (used != tok.size())
            throw std::invalid_argument("domain literal: bad number '" + tok + "'");
    }
    return out;
}

std::string format_number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

Domain Domain::full_space(int n, double truncation_radius) {
    if (n < 1)
        throw std::domain_error("Domain: dimension must be >= 1");
    if (!(truncation_radius > 0.0))
        throw std::domain_error("Domain: truncation radius must be positive");
    Domain d;
    d.kind_ = Kind::full_space;
    d.n_ = n;
    d.truncation_radius_ = truncation_radius;
    return d;
}

Domain Domain::box(std::vector<double> lo, std::vector<double> hi) {
    if (lo.empty() || lo.size() != hi.size())
        throw std::domain_error("Domain: box bounds must be nonempty and of equal length");
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (!(lo[i] < hi[i]))
            throw std::domain_error("Domain: box requires lo < hi componentwise");
    Domain d;
    d.kind_ = Kind::box;
    d.n_ = static_cast<int>(lo.size());
    d.lo_ = std::move(lo);
    d.hi_ = std::move(hi);
    return d;
}

Domain Domain::ball(std::vector<double> center, double radius) {
    if (center.empty())
        throw std::domain_error("Domain: ball center must be nonempty");
    if (!(radius > 0.0))
        throw std::domain_error("Domain: ball radius must be positive");
    Domain d;
    d.kind_ = Kind::ball;
    d.n_ = static_cast<int>(center.size());
    d.center_ = std::move(center);
    d.radius_ = radius;
    return d;
}

double Domain::diameter() const {
    switch (kind_) {
        case Kind::box: {
            double s = 0.0;
            for (std::size_t i = 0; i < lo_.size(); ++i)
                s += (hi_[i] - lo_[i]) * (hi_[i] - lo_[i]);
            return std::sqrt(s);
        }
        case Kind::ball:
            return 2.0 * radius_;
        case Kind::full_space:
            throw std::domain_error("Domain: full space has no diameter");
    }
    throw std::logic_error("Domain: bad kind");
}

double Domain::volume() const {
    switch (kind_) {
        case Kind::box: {
            double v = 1.0;
            for (std::size_t i = 0; i < lo_.size(); ++i)
                v *= hi_[i] - lo_[i];
            return v;
        }
        case Kind::ball: {
            // pi^{n/2} / Gamma(n/2+1) * r^n
            double v = std::pow(radius_, n_);
            v *= std::exp(0.5 * n_ * std::log(M_PI) - std::lgamma(0.5 * n_ + 1.0));
            return v;
        }
        case Kind::full_space: {
            double v = 1.0;
            for (int i = 0; i < n_; ++i)
                v *= 2.0 * truncation_radius_;
            return v;
        }
    }
    throw std::logic_error("Domain: bad kind");
}

double Domain::truncation_radius() const {
    if (kind_ != Kind::full_space)
        throw std::domain_error("Domain: truncation radius applies to full_space only");
    return truncation_radius_;
}

bool Domain::contains(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != n_)
        throw std::invalid_argument("Domain::contains: dimension mismatch");
    switch (kind_) {
        case Kind::box:
            for (std::size_t i = 0; i < x.size(); ++i)
                if (x[i] < lo_[i] || x[i] > hi_[i])
                    return false;
            return true;
        case Kind::ball: {
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i)
                s += (x[i] - center_[i]) * (x[i] - center_[i]);
            return s <= radius_ * radius_;
        }
        case Kind::full_space:
            return true;
    }
    throw std::logic_error("Domain: bad kind");
}

std::pair<std::vector<double>, std::vector<double>> Domain::bounding_box() const {
    switch (kind_) {
        case Kind::box:
            return {lo_, hi_};
        case Kind::ball: {
            std::vector<double> lo(center_), hi(center_);
            for (std::size_t i = 0; i < lo.size(); ++i) {
                lo[i] -= radius_;
                hi[i] += radius_;
            }
            return {lo, hi};
        }
        case Kind::full_space: {
            std::vector<double> lo(static_cast<std::size_t>(n_), -truncation_radius_);
            std::vector<double> hi(static_cast<std::size_t>(n_), truncation_radius_);
            return {lo, hi};
        }
    }
    throw std::logic_error("Domain: bad kind");
}

std::pair<Domain, double> Domain::scale_map() const {
    if (!bounded())
        throw std::domain_error("Domain::scale_map: requires a bounded domain");
    const double R = diameter();
    if (kind_ == Kind::box) {
        std::vector<double> lo(lo_), hi(hi_);
        for (std::size_t i = 0; i < lo.size(); ++i) {
            lo[i] /= R;
            hi[i] /= R;
        }
        return {Domain::box(std::move(lo), std::move(hi)), R};
    }
    std::vector<double> c(center_);
    for (double& ci : c)
        ci /= R;
    return {Domain::ball(std::move(c), radius_ / R), R};
}

Domain Domain::parse(const std::string& text, int full_space_dim) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("domain literal: expected '<kind>:<params>', got '" + text + "'");
    const std::string kind = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    if (kind == "rn") {
        const double R = std::stod(rest);
        return full_space(full_space_dim, R);
    }
    if (kind == "box") {
        // per-axis "lo,hi" groups separated by ';'
        std::vector<double> lo, hi;
        std::stringstream ss(rest);
        std::string group;
        while (std::getline(ss, group, ';')) {
            const auto nums = parse_number_list(group);
            if (nums.size() != 2)
                throw std::invalid_argument("domain literal: box axis needs 'lo,hi', got '" + group + "'");
            lo.push_back(nums[0]);
            hi.push_back(nums[1]);
        }
        return box(std::move(lo), std::move(hi));
    }
    if (kind == "ball") {
        const auto semi = rest.rfind(';');
        if (semi == std::string::npos)
            throw std::invalid_argument("domain literal: ball needs 'center;radius'");
        auto center = parse_number_list(rest.substr(0, semi));
        const double r = std::stod(rest.substr(semi + 1));
        return ball(std::move(center), r);
    }
    throw std::invalid_argument("domain literal: unknown kind '" + kind + "'");
}

std::string Domain::to_string() const {
    std::string out;
    switch (kind_) {
        case Kind::box:
            out = "box:";
            for (std::size_t i = 0; i < lo_.size(); ++i) {
                if (i)
                    out += ';';
                out += format_number(lo_[i]) + "," + format_number(hi_[i]);
            }
            return out;
        case Kind::ball:
            out = "ball:";
            for (std::size_t i = 0; i < center_.size(); ++i) {
                if (i)
                    out += ',';
                out += format_number(center_[i]);
            }
            out += ";" + format_number(radius_);
            return out;
        case Kind::full_space:
            return "rn:" + format_number(truncation_radius_);
    }
    throw std::logic_error("Domain: bad kind");
}

}  // namespace fracsob::domains
