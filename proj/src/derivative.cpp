#include "nlcalc/derivative.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlcalc/parallel.hpp"

namespace nlcalc {

namespace {

/// One output point: integral over s in (0, W) of k_eps(s) (u(t+s) - u(t-s)).
/// Splits at the scaled support edge, at caller-supplied kink offsets, and
/// grades across a singular origin.
double apply_at(const ScaledKernel& kernel, const std::function<double(double)>& u,
                double t, double window, const QuadratureConfig& cfg,
                std::span<const double> kinks) {
    auto integrand = [&](double s) { return kernel(s) * (u(t + s) - u(t - s)); };

    const auto& flat = kernel.base().flatness();
    const bool singular = flat && flat->kind == FlatnessCase::singular;

    double lower = 0.0;
    double total = 0.0;
    if (singular) {
        double cut = std::min(window, kernel.epsilon() * flat->gauge_radius);
        for (double x : kinks) {  // keep kinks of u out of the graded panel
            for (double off : {x - t, t - x})
                if (off > 0.0 && off < cut) cut = off;
        }
        // Below s0 the odd difference of u drowns in roundoff while the
        // kernel still amplifies it, so the panel (0, s0) uses the local
        // linearization: a stable difference quotient at s0 against the
        // exactly integrable first-moment mass of the kernel there.
        const double s0 = std::min(0.5 * cut, 1e-5 * std::max(1.0, std::fabs(t)));
        const double slope = (u(t + s0) - u(t - s0)) / (2.0 * s0);
        const double mass = integrate_graded(
            [&](double s) { return 2.0 * s * kernel(s); }, s0,
            grading_exponent(flat->exponent + 1.0), cfg);
        total += slope * mass;
        total += integrate(integrand, s0, cut, cfg);
        lower = cut;
    }
    if (lower >= window) return total;

    std::vector<double> breaks;
    if (kernel.base().has_compact_support())
        breaks.push_back(kernel.epsilon() * kernel.base().support_radius());
    for (double x : kinks) {
        breaks.push_back(x - t);   // kink hit by u(t + s)
        breaks.push_back(t - x);   // kink hit by u(t - s)
    }
    total += integrate_split(integrand, lower, window, std::move(breaks), cfg);
    return total;
}

} // namespace

std::vector<double> apply(const ScaledKernel& kernel,
                          const std::function<double(double)>& u,
                          std::span<const double> points,
                          const QuadratureConfig& cfg,
                          std::span<const double> kinks) {
    const double window = kernel.effective_radius(cfg);
    std::vector<double> out(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        out[i] = apply_at(kernel, u, points[i], window, cfg, kinks);
    });
    return out;
}

std::vector<double> apply(const ScaledKernel& kernel, const GridFunction& u,
                          std::span<const double> points,
                          const QuadratureConfig& cfg) {
    const double window = kernel.effective_radius(cfg);
    for (double t : points) {
        if (t - window < u.min_point() || t + window > u.max_point())
            throw std::domain_error(
                "apply: kernel window leaves the sampled domain (pass a callable "
                "for whole-line inputs)");
    }
    auto interp = [&u](double t) { return u.interpolate(t); };
    std::vector<double> out(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        out[i] = apply_at(kernel, interp, points[i], window, cfg, {});
    });
    return out;
}

GridFunction apply_grid(const ScaledKernel& kernel,
                        const std::function<double(double)>& u,
                        double a, double b, std::size_t n,
                        const QuadratureConfig& cfg,
                        std::span<const double> kinks) {
    std::vector<double> points(n);
    const double h = (b - a) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) points[i] = a + h * static_cast<double>(i);
    return GridFunction(a, b, apply(kernel, u, points, cfg, kinks));
}

double taylor_bound(const ScaledKernel& kernel, double sup_u2, const QuadratureConfig& cfg) {
    if (sup_u2 < 0.0) throw std::invalid_argument("taylor_bound: sup|u''| must be >= 0");
    const double m1 = moment(kernel.base(), 1, false, cfg);
    const double m2_abs = moment(kernel.base(), 2, true, cfg);
    return kernel.epsilon() * m2_abs / (2.0 * std::fabs(m1)) * sup_u2;
}

double weak_pairing(const GridFunction& f, const GridFunction& psi) {
    if (!f.same_grid(psi))
        throw std::invalid_argument("weak_pairing: functions live on different grids");
    const std::size_t n = f.size();
    double sum = 0.5 * (f[0] * psi[0] + f[n - 1] * psi[n - 1]);
    for (std::size_t i = 1; i + 1 < n; ++i) sum += f[i] * psi[i];
    return sum * f.spacing();
}

double annihilation_residual(const ScaledKernel& kernel, int n, int probe_points,
                             const QuadratureConfig& cfg) {
    if (probe_points < 1)
        throw std::invalid_argument("annihilation_residual: need at least one probe point");
    const double eps = kernel.epsilon();
    const double freq = n * M_PI / eps;  // g_n(t) = exp(i freq t)
    const double window = kernel.effective_radius(cfg);
    // Quarter-period panels for both the mode and the kernel profile.
    const double period = (n == 0) ? window : std::min(2.0 * M_PI / std::fabs(freq), window);

    double residual = 0.0;
    std::vector<double> sups(probe_points);
    parallel_for(probe_points, [&](std::size_t i) {
        const double t = 2.0 * eps * (static_cast<double>(i) + 0.5) /
                         static_cast<double>(probe_points);
        auto real_part = [&](double s) {
            return kernel(s) * (std::cos(freq * (t + s)) - std::cos(freq * (t - s)));
        };
        auto imag_part = [&](double s) {
            return kernel(s) * (std::sin(freq * (t + s)) - std::sin(freq * (t - s)));
        };
        const double re = integrate_oscillatory(real_part, 0.0, window, period, cfg);
        const double im = integrate_oscillatory(imag_part, 0.0, window, period, cfg);
        sups[i] = std::max(std::fabs(re), std::fabs(im));
    });
    for (double s : sups) residual = std::max(residual, s);
    return residual;
}

} // namespace nlcalc
