#ifndef NLCALC_CONVERGENCE_LAB_HPP
#define NLCALC_CONVERGENCE_LAB_HPP

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nlcalc/antiderivative.hpp"
#include "nlcalc/kernels.hpp"

namespace nlcalc {

struct SweepReport {
    std::string kernel;
    std::string experiment;
    std::vector<double> epsilons;                       // strictly decreasing
    std::map<std::string, std::vector<double>> errors;  // norm name -> per-epsilon values
    double fitted_order = 0.0;                          // NaN when floor-limited
    bool floor_limited = false;
    std::vector<bool> bound_checks;                     // empty when no bound applies
};

/// Least-squares slope of log(error) against log(epsilon).
double fit_order(std::span<const double> epsilons, std::span<const double> errors);

/// Per-epsilon sup and L2 errors of the applied operator against the exact
/// derivative on a uniform region grid. When sup_u2 is finite the Taylor
/// bound is checked at every epsilon. The order is fitted only from at
/// least four points all sitting well above the quadrature floor.
SweepReport derivative_sweep(const KernelProfile& kernel,
                             const std::function<double(double)>& u,
                             const std::function<double(double)>& u_prime,
                             double sup_u2,
                             std::vector<double> epsilons,
                             double region_a, double region_b, std::size_t samples,
                             std::span<const double> kinks = {},
                             const QuadratureConfig& cfg = {});

/// Per-epsilon strong and weak errors of the spectral solve against a
/// classical reference, constant-adjusted by mean matching on the
/// comparison region. p_norms uses 0 for the sup norm. Weak errors pair the
/// adjusted difference with the catalogue bump functions.
SweepReport antiderivative_sweep(const KernelProfile& kernel,
                                 const std::function<double(double)>& F,
                                 const std::function<double(double)>& v_ref,
                                 std::vector<double> epsilons,
                                 std::span<const double> p_norms,
                                 double half_width, std::size_t n,
                                 double region_half_width,
                                 const SolverConfig& solver_cfg = {});

/// Per-epsilon displacement |eps * xi_j(eps) - xi_j| of the first three
/// positive zeros of the scaled symbol from the unscaled ones. The per-
/// epsilon bound flag asserts displacements within the refinement
/// tolerance (1e-9).
SweepReport zero_scaling_sweep(const KernelProfile& kernel,
                               std::vector<double> epsilons,
                               double window, int resolution = 64,
                               const QuadratureConfig& cfg = {});

/// Plot-ready curves of the applied operator for u(t) = |t|^(1/2) with the
/// indicator kernel, one column per epsilon, next to the classical
/// derivative (NaN at t = 0).
struct FigureDataset {
    std::vector<double> epsilons;
    std::vector<double> t;
    std::vector<double> classical;
    std::vector<std::vector<double>> curves;  // curves[e][i]
};

FigureDataset figure_sqrt_curves(std::vector<double> epsilons,
                                 double a = -3.0, double b = 3.0, std::size_t samples = 601,
                                 const QuadratureConfig& cfg = {});

void write_figure_csv(const FigureDataset& data, const std::string& path);

/// Three fixed compactly supported smooth test functions on (-1, 1):
/// polynomial times the standard plateau exp(-1/(1-t^2)).
const std::vector<std::function<double(double)>>& bump_catalogue();

std::string to_json(const SweepReport& report);

} // namespace nlcalc

#endif
