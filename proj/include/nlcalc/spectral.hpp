#ifndef NLCALC_SPECTRAL_HPP
#define NLCALC_SPECTRAL_HPP

#include <span>
#include <string>
#include <vector>

#include "nlcalc/kernels.hpp"
#include "nlcalc/quadrature.hpp"

namespace nlcalc {

enum class SpectrumForm { closed_form, quadrature };

/// Real odd symbol of a scaled kernel. The Fourier transform of an
/// anti-symmetric kernel is purely imaginary; this evaluates the real
/// quantity
///
///     T(xi) = 2 * integral_{0}^{inf} sin(2 pi xi s) k_eps(s) ds,
///
/// which is i times the transform under the e^{-2 pi i xi t} convention.
/// Catalogue kernels with elementary transforms use the closed form, the
/// rest integrate (quarter-period oscillatory panels, graded near a
/// singular origin).
class KernelSpectrum {
public:
    KernelSpectrum(ScaledKernel source, QuadratureConfig cfg = {});

    const ScaledKernel& source() const { return source_; }
    SpectrumForm form() const { return form_; }

    double operator()(double xi) const;

    /// 2 pi xi - T(xi), evaluated without cancellation (series-safe closed
    /// forms, or the integral of [x - sin x] against the kernel).
    double classical_gap(double xi) const;

    /// Forces quadrature evaluation even when a closed form exists.
    double quadrature_value(double xi) const;

private:
    ScaledKernel source_;
    SpectrumForm form_;
    QuadratureConfig cfg_;
    double first_moment_;
};

/// Convenience wrapper: T(xi) for the scaled kernel.
double transform(const ScaledKernel& kernel, double xi, const QuadratureConfig& cfg = {});

/// Same symbol for the raw (unscaled, unnormalized) profile:
/// 2 * integral sin(2 pi xi s) k(s) ds on (0, support).
double unscaled_transform(const KernelProfile& kernel, double xi,
                          const QuadratureConfig& cfg = {});

struct Zero {
    double xi = 0.0;
    int multiplicity = 1;
};

/// Nonnegative real zeros of an odd function on [0, window]; negative
/// zeros follow by reflection. xi = 0 is always included.
struct ZeroSet {
    std::vector<Zero> zeros;  // ascending, zeros[0].xi == 0
    double window = 0.0;
};

/// Zeros of the unscaled kernel symbol: sign-change bracketing at
/// `resolution` samples per unit xi, bisection refinement, and detection
/// of even-multiplicity touch points through local minima of |T|.
ZeroSet find_zeros(const KernelProfile& kernel, double window, int resolution = 64,
                   double tol = 1e-12, const QuadratureConfig& cfg = {});

/// Zeros of the scaled kernel symbol on [0, window].
ZeroSet find_scaled_zeros(const ScaledKernel& kernel, double window, int resolution = 64,
                          double tol = 1e-12, const QuadratureConfig& cfg = {});

namespace detail {
/// Core locator used by both entry points; exposed for testing.
ZeroSet locate_zeros(const std::function<double(double)>& f, double window,
                     int resolution, double tol);
}

struct BoundCheck {
    double xi = 0.0;
    double lower = 0.0;
    double value = 0.0;
    double upper = 0.0;
    bool ok = false;
};

struct BoundCertificate {
    std::string kernel;
    double epsilon = 0.0;
    double near_constant = 0.0;        // 4 pi^3 m3 / (3 m1)
    double far_constant = 0.0;         // gauge-case integral / (2^k m1); NaN if no gauge
    double positivity_margin = 0.0;    // 2 pi b - near_constant / (4 b); NaN if no gauge
    bool all_ok = false;
    std::vector<BoundCheck> checks;
};

/// Small-frequency sandwich: for each probe,
///   2 pi |xi| - C eps^2 |xi|^3 <= T(|xi|) <= 2 pi |xi|,
/// with C = near_field_constant(kernel). Violations beyond rel_tol mark the
/// check (and the certificate) failed; nothing is thrown.
BoundCertificate near_field_certificate(const ScaledKernel& kernel,
                                        std::span<const double> xis,
                                        double rel_tol = 1e-10,
                                        const QuadratureConfig& cfg = {});

/// Large-frequency lower bound: requires every |xi| >= 1/(2 eps b) where b
/// is the gauge radius (throws std::domain_error otherwise), and checks
///   T(|xi|) >= C' eps^{-2-k} |xi|^{-1-k}.
BoundCertificate far_field_certificate(const ScaledKernel& kernel,
                                       std::span<const double> xis,
                                       double rel_tol = 1e-9,
                                       const QuadratureConfig& cfg = {});

double near_field_constant(const KernelProfile& kernel, const QuadratureConfig& cfg = {});

/// Constant of the far-field bound, from the explicit case integral of the
/// power gauge. Throws when the kernel has no gauge record.
double far_field_constant(const KernelProfile& kernel, const QuadratureConfig& cfg = {});

/// 2 pi b - C / (4 b): positive values certify that the near-field piece of
/// the correction bound has a positive denominator.
double positivity_margin(const KernelProfile& kernel, const QuadratureConfig& cfg = {});

/// Deviation of the spectral inverse from classical integration:
///   correction(xi) = 2 pi / T(xi) - 1 / xi,
/// evaluated through the cancellation-free classical gap. Throws
/// std::domain_error at a zero of the symbol.
double spectral_correction(const ScaledKernel& kernel, double xi,
                           const QuadratureConfig& cfg = {});
double spectral_correction(const KernelSpectrum& spectrum, double xi);

std::string to_json(const ZeroSet& zeros, const std::string& kernel, double epsilon);
std::string to_json(const BoundCertificate& cert);

} // namespace nlcalc

#endif
