#ifndef NLCALC_ANTIDERIVATIVE_HPP
#define NLCALC_ANTIDERIVATIVE_HPP

#include <functional>
#include <string>
#include <vector>

#include "nlcalc/grid_function.hpp"
#include "nlcalc/kernels.hpp"
#include "nlcalc/quadrature.hpp"

namespace nlcalc {

enum class ConstantPolicy { zero_mean, fixed_value };

struct SolverConfig {
    /// Spectrum magnitudes below null_threshold * max are treated as
    /// annihilated modes and suppressed.
    double null_threshold = 1e-8;
    ConstantPolicy policy = ConstantPolicy::zero_mean;
    double fixed_constant = 0.0;

    /// The right-hand side must decay at the domain boundary for the
    /// periodized transform to represent it; violations throw when strict,
    /// otherwise they are recorded on the result.
    bool strict_boundary = true;
    double boundary_tolerance = 1e-3;

    bool compute_residual = true;
    std::size_t residual_samples = 1024;

    QuadratureConfig quadrature{};
};

struct NullMode {
    double xi = 0.0;
    int degree = 0;
};

struct AntiderivativeResult {
    GridFunction particular;
    std::vector<NullMode> null_modes;  // always contains (0, 0)
    double residual = 0.0;             // sup |D particular - F| on the interior; NaN if skipped
    double boundary_ratio = 0.0;       // max edge |F| over sup |F|
};

/// Solves D u = F by spectral division on the grid of F (which must be a
/// symmetric domain [-T, T) with a power-of-two sample count).
///
/// The forward transform uses the continuous convention: bin k carries
/// frequency xi_k = k / (2T) (negative above Nyquist) and the coefficient
/// h * (-1)^k * FFT(F). Each nonzero non-null bin is multiplied by
/// -i * [1 / (2 pi xi) + correction(xi) / (2 pi)], which equals -i / T(xi)
/// with the near-origin cancellation removed. The zero bin's content (the
/// grid mean of F) re-enters in real space as an exact linear ramp, since
/// the scaled kernel maps t to 1; the remaining additive constant follows
/// the configured policy. Bins whose spectrum magnitude falls below the
/// null threshold are zeroed and reported as null modes.
AntiderivativeResult solve(const ScaledKernel& kernel, const GridFunction& F,
                           const SolverConfig& cfg = {});

/// Frequencies and polynomial degrees of the kernel's annihilated modes
/// with scaled frequency strictly inside (-window, window): the zero set of
/// the unscaled symbol divided by epsilon, each zero of multiplicity m
/// contributing degrees 0..m-1, plus the constant at frequency 0.
std::vector<NullMode> homogeneous_basis(const KernelProfile& kernel, double epsilon,
                                        double window, int resolution = 64,
                                        const QuadratureConfig& cfg = {});

/// Closed-form references for validation. "exp-arctan" is the exponential
/// kernel with F(t) = 1/(1+t^2): arctan(t) + 2 eps^2 t / (1+t^2)^2.
double closed_form_reference(const std::string& name, double epsilon, double t);

/// For the exponential kernel the solve has the exact closed form
/// integral(F) - eps^2 F'; supply the classical antiderivative and the
/// derivative of F.
double exponential_kernel_reference(const std::function<double(double)>& F_antiderivative,
                                    const std::function<double(double)>& F_prime,
                                    double epsilon, double t);

/// Fourier-multiplier order change of the solve relative to F at large
/// frequency: 1 + gauge exponent. Negative values mean the solve smooths,
/// positive values mean it roughens. Throws without a gauge record.
double smoothness_shift(const KernelProfile& kernel);

std::string to_json(const AntiderivativeResult& result, const std::string& kernel,
                    double epsilon, const SolverConfig& cfg);

} // namespace nlcalc

#endif
