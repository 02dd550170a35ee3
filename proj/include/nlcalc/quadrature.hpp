#ifndef NLCALC_QUADRATURE_HPP
#define NLCALC_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace nlcalc {

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Returns the n-point Gauss-Legendre rule. Rules are computed once by
/// Newton iteration on the Legendre recurrence and cached per order.
const GaussRule& gauss_legendre(int n);

/// Shared quadrature settings. `tolerance` is an absolute target per
/// integral; `panel_budget` caps the total number of panels an adaptive
/// integration may spend; `truncation_window` bounds the integration
/// domain for kernels without compact support (in unscaled profile units).
struct QuadratureConfig {
    double tolerance = 1e-12;
    int panel_budget = 1 << 14;
    int points = 16;
    double truncation_window = 40.0;
};

/// Integral of f over [a, b] by adaptive bisection of Gauss-Legendre
/// panels. Throws std::runtime_error when the panel budget is exhausted
/// before the tolerance is met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& cfg = {});

/// Same as integrate(), with forced panel breaks at the given points
/// (kinks, support edges). Breakpoints outside (a, b) are ignored.
double integrate_split(const std::function<double(double)>& f, double a, double b,
                       std::vector<double> breakpoints, const QuadratureConfig& cfg = {});

/// Integral of an oscillatory f over [a, b]: composite Gauss-Legendre with
/// at most a quarter of the given period per panel.
double integrate_oscillatory(const std::function<double(double)>& f, double a, double b,
                             double period, const QuadratureConfig& cfg = {});

/// Integral of f over (0, b] where f(s) ~ s^p near 0 for some p > -1.
/// The substitution s = b w^q removes the algebraic endpoint behavior;
/// q should come from grading_exponent(p).
double integrate_graded(const std::function<double(double)>& f, double b, int q,
                        const QuadratureConfig& cfg = {});

/// Grading exponent q with q * (p + 1) >= 6, making the substituted
/// integrand C^5 at the origin. Requires p > -1.
int grading_exponent(double p);

} // namespace nlcalc

#endif
