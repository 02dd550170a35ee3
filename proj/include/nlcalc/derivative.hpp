#ifndef NLCALC_DERIVATIVE_HPP
#define NLCALC_DERIVATIVE_HPP

#include <functional>
#include <span>
#include <vector>

#include "nlcalc/grid_function.hpp"
#include "nlcalc/kernels.hpp"
#include "nlcalc/quadrature.hpp"

namespace nlcalc {

/// Applies the nonlocal derivative to a callable at the given points:
///
///     D u(t) = integral k_eps(s) u(t + s) ds
///            = integral_0^inf k_eps(s) [u(t + s) - u(t - s)] ds,
///
/// the second form by anti-symmetry, so constants are annihilated exactly
/// instead of by cancellation. `kinks` lists points where u is not smooth;
/// quadrature panels are split there. Points are independent and evaluated
/// in parallel.
std::vector<double> apply(const ScaledKernel& kernel,
                          const std::function<double(double)>& u,
                          std::span<const double> points,
                          const QuadratureConfig& cfg = {},
                          std::span<const double> kinks = {});

/// Grid-input variant: u(t +- s) comes from piecewise-cubic interpolation
/// between samples. Every output point needs the kernel window
/// [t - W, t + W] inside the sampled range; a point violating that throws
/// std::domain_error (no extrapolation).
std::vector<double> apply(const ScaledKernel& kernel, const GridFunction& u,
                          std::span<const double> points,
                          const QuadratureConfig& cfg = {});

/// Convenience: sample the result on a uniform power-of-two grid.
GridFunction apply_grid(const ScaledKernel& kernel,
                        const std::function<double(double)>& u,
                        double a, double b, std::size_t n,
                        const QuadratureConfig& cfg = {},
                        std::span<const double> kinks = {});

/// Guaranteed sup-norm bound on D u - u' for twice differentiable u:
/// eps * |k|_(2) / (2 |k_(1)|) * sup|u''|.
double taylor_bound(const ScaledKernel& kernel, double sup_u2,
                    const QuadratureConfig& cfg = {});

/// Trapezoid approximation of the inner product integral of f * psi.
/// Both functions must live on the same grid.
double weak_pairing(const GridFunction& f, const GridFunction& psi);

/// Sup over a probe grid of |D g_n| for the complex mode
/// g_n(t) = exp(i n pi t / eps): the real and imaginary parts are treated
/// as a coupled pair of real problems and combined by max.
double annihilation_residual(const ScaledKernel& kernel, int n,
                             int probe_points = 64,
                             const QuadratureConfig& cfg = {});

} // namespace nlcalc

#endif
