#pragma once

#include <vector>

#include "fracsob/funcspace.hpp"
#include "fracsob/quad.hpp"

namespace fracsob::spectral {

enum class EnergyMethod { closed_form, quadrature };

/// Weighted Fourier energy int |xi|^{2r} |vhat(xi)|^2 dxi.
struct SpectralEnergy {
    double r = 0.0;
    double value = 0.0;
    quad::Estimate estimate;
    EnergyMethod method = EnergyMethod::closed_form;
};

/// Energy of v at weight r >= 0. Centered Gaussian-class transforms reduce
/// to one-dimensional Gamma integrals (closed form); anything else goes
/// through quadrature on a truncated cube.
SpectralEnergy spectral_energy(const funcspace::TestFunction& v, double r,
                               const quad::QuadSpec& spec);

/// |v|^2_{sigma,2,R^n} via the spectral identity
/// (2pi)^{-n} G_{sigma,n} int |xi|^{2 sigma} |vhat|^2.
double gagliardo_via_spectral(const funcspace::TestFunction& v, double sigma,
                              const quad::QuadSpec& spec);

struct MembershipVerdict {
    bool finite = false;
    double value = 0.0;
    double doubling_gap = 0.0;  // relative change when the cutoff radius doubles
};

/// Declares the energy finite when doubling the xi-truncation radius moves
/// the quadrature value by less than the threshold (relative). Functions
/// without a closed-form transform are rejected.
MembershipVerdict membership_htilde(const funcspace::TestFunction& v, double r,
                                    double threshold = 1e-8);

struct BeppoLeviEntry {
    funcspace::MultiIndex alpha;
    double value = 0.0;
    bool finite = false;
};

struct BeppoLeviVerdict {
    std::vector<BeppoLeviEntry> entries;  // one per |alpha| = m
    bool finite = false;
};

/// Per-multi-index energies int |xi|^{2s} |FT(d^alpha v)|^2 for |alpha| = m;
/// the split r = m + s characterizes W^{r,2} through X^{m,s}.
BeppoLeviVerdict membership_beppo_levi(const funcspace::TestFunction& v, int m, double s,
                                       double threshold = 1e-8);

struct EquivalenceReport {
    double sigma = 0.0;
    int l = 0;
    int n = 1;
    double ratio = 0.0;  // (2 sigma(1-sigma))^{1/2} |v|_{l+sigma,2} / |v|_{0,l+sigma}
    double c1 = 0.0, c2 = 0.0;  // computed envelope over sigma in (0,1)
    bool within = false;
};

/// Ratio between the normalized Gagliardo semi-norm and the homogeneous
/// spectral semi-norm, checked against the envelope of
/// 2 sigma(1-sigma)(2pi)^{-n} G_{sigma,n}.
EquivalenceReport equivalence_check(const funcspace::TestFunction& v, int l, double sigma);

}  // namespace fracsob::spectral
