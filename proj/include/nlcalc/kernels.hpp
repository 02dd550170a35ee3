#ifndef NLCALC_KERNELS_HPP
#define NLCALC_KERNELS_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlcalc/quadrature.hpp"

namespace nlcalc {

enum class DecayClass { compact, exponential_type };
enum class FlatnessCase { finite_limit, singular };

/// Power gauge of the kernel near the origin. On (0, gauge_radius) the
/// positive branch is pinched between coeff_lower and coeff_upper multiples
/// of s^exponent; for the finite_limit case the pinch applies to the
/// deviation from the one-sided limit at 0, with exponent > 0 and
/// coeff_lower >= coeff_upper, while the singular case has exponent in
/// (-2, 0) and coeff_lower <= coeff_upper.
struct Flatness {
    FlatnessCase kind = FlatnessCase::finite_limit;
    double exponent = 1.0;
    double gauge_radius = 1.0;
    double coeff_upper = 1.0;  // K+
    double coeff_lower = 1.0;  // K-
};

/// An unscaled anti-symmetric kernel profile s -> k(s), defined away from
/// s = 0, together with its support and decay metadata. Odd moments are
/// cached; copies share the cache.
class KernelProfile {
public:
    KernelProfile(std::string name, std::function<double(double)> profile,
                  double support_radius, DecayClass decay,
                  std::optional<Flatness> flatness = std::nullopt);

    const std::string& name() const { return name_; }
    double operator()(double s) const { return profile_(s); }
    double support_radius() const { return support_radius_; }
    bool has_compact_support() const;
    DecayClass decay() const { return decay_; }
    const std::optional<Flatness>& flatness() const { return flatness_; }

    /// Parameter map the profile was built from (empty for custom kernels);
    /// used to echo resolved configs.
    const std::map<std::string, double>& parameters() const { return params_; }
    void set_parameters(std::map<std::string, double> p) { params_ = std::move(p); }

    double cached_moment(int j, bool absolute, const std::function<double()>& compute) const;

private:
    std::string name_;
    std::function<double(double)> profile_;
    double support_radius_;
    DecayClass decay_;
    std::optional<Flatness> flatness_;
    std::map<std::string, double> params_;

    struct MomentCache;
    std::shared_ptr<MomentCache> cache_;
};

/// The dilated, normalized kernel: k_eps(s) = sigma * k(s / epsilon) with
/// sigma chosen so that the first moment of k_eps is exactly 1.
class ScaledKernel {
public:
    ScaledKernel(KernelProfile base, double epsilon, double sigma)
        : base_(std::move(base)), epsilon_(epsilon), sigma_(sigma) {}

    const KernelProfile& base() const { return base_; }
    double epsilon() const { return epsilon_; }
    double sigma() const { return sigma_; }
    double operator()(double s) const { return sigma_ * base_(s / epsilon_); }

    /// Radius beyond which the scaled kernel is zero or numerically
    /// negligible (below 1e-16 of its scale).
    double effective_radius(const QuadratureConfig& cfg = {}) const;

private:
    KernelProfile base_;
    double epsilon_;
    double sigma_;
};

struct CheckConfig {
    int grid_samples = 1 << 12;
    int max_factorial_order = 12;  // J for the factorial-growth surrogate
    double tolerance = 1e-12;
    double strict_fraction = 0.5;  // share of sample steps that must strictly decrease
};

struct AdmissibilityReport {
    bool antisymmetry_ok = false;
    double antisymmetry_violation = 0.0;

    bool dipole_ok = false;
    double first_moment = 0.0;

    bool analytic_class_ok = false;
    double analytic_constant = 0.0;           // fitted from j = 1
    std::vector<double> factorial_ratios;     // |k|_(j) / j! for j = 1..J

    bool positivity_ok = false;
    bool flatness_ok = false;
    bool has_flatness = false;

    bool fully_admissible() const {
        return antisymmetry_ok && dipole_ok && analytic_class_ok && positivity_ok && flatness_ok;
    }
};

/// Catalogue kernels. `power` takes the exponent parameter and must lie in
/// (-2, 0) or (0, inf).
enum class BuiltinKernel { indicator, exponential, sine, power };

KernelProfile builtin_kernel(BuiltinKernel which, double power_exponent = 0.0);

/// Catalogue lookup by name ("indicator", "exponential", "sine", "power")
/// with a parameter map ("k_alpha" for power). Throws std::invalid_argument
/// for unknown names or out-of-range parameters.
KernelProfile make_kernel(const std::string& name,
                          const std::map<std::string, double>& params = {});

/// Kernel from tabulated samples (s > 0 branch; the s < 0 branch follows by
/// anti-symmetry). Evaluation is piecewise-cubic in the table.
KernelProfile tabulated_kernel(const std::string& name,
                               std::vector<std::pair<double, double>> samples,
                               double support_radius,
                               std::optional<Flatness> flatness = std::nullopt);

/// j-th moment of the profile: integral of s^j k(s) (signed) or s^j |k(s)|
/// (absolute). Even signed moments are 0 by anti-symmetry and returned
/// exactly; everything else integrates on (0, inf) and doubles. Throws
/// std::domain_error when the integral does not converge.
double moment(const KernelProfile& k, int j, bool absolute = false,
              const QuadratureConfig& cfg = {});

/// Builds the scaled kernel with sigma = 1 / (epsilon^2 * m1). Throws when
/// the first moment vanishes or is not finite.
ScaledKernel scale(const KernelProfile& k, double epsilon,
                   const QuadratureConfig& cfg = {});

/// Evaluates every admissibility flag by sampling and quadrature. Failures
/// are reported, never thrown.
AdmissibilityReport check_admissibility(const KernelProfile& k,
                                        const CheckConfig& cfg = {});

} // namespace nlcalc

#endif
