// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances and runtime budgets are pinned in code.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "nlcalc/antiderivative.hpp"
#include "nlcalc/convergence_lab.hpp"
#include "nlcalc/derivative.hpp"
#include "nlcalc/spectral.hpp"

using namespace nlcalc;

namespace {

int failures = 0;

class Criterion {
public:
    Criterion(int number, std::string title)
        : number_(number), title_(std::move(title)),
          start_(std::chrono::steady_clock::now()) {}

    void require(bool ok, const std::string& what) {
        if (!ok) issues_.push_back(what);
    }

    void finish(double budget_seconds) {
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        if (elapsed > budget_seconds)
            issues_.push_back("runtime " + std::to_string(elapsed) + "s over budget " +
                              std::to_string(budget_seconds) + "s");
        if (issues_.empty()) {
            std::printf("[PASS] criterion %2d: %s (%.2fs)\n", number_, title_.c_str(), elapsed);
        } else {
            ++failures;
            std::printf("[FAIL] criterion %2d: %s (%.2fs)\n", number_, title_.c_str(), elapsed);
            for (const std::string& issue : issues_)
                std::printf("       - %s\n", issue.c_str());
        }
    }

private:
    int number_;
    std::string title_;
    std::vector<std::string> issues_;
    std::chrono::steady_clock::time_point start_;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// 1. Exponential-kernel solve against the closed-form antiderivative.
void criterion_closed_form_solve() {
    Criterion c(1, "closed-form antiderivative (exponential kernel, eps = 0.1)");
    const double eps = 0.1;
    const GridFunction F = GridFunction::sample(-40.0, 40.0, 1 << 14,
                                                [](double t) { return 1.0 / (1.0 + t * t); });
    SolverConfig cfg;
    cfg.compute_residual = false;
    const AntiderivativeResult result = solve(scale(make_kernel("exponential"), eps), F, cfg);

    std::vector<double> diff;
    double sup_ref = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) {
        const double t = F.point(i);
        if (std::fabs(t) > 10.0) continue;
        const double ref = closed_form_reference("exp-arctan", eps, t);
        sup_ref = std::max(sup_ref, std::fabs(ref));
        diff.push_back(result.particular[i] - ref);
    }
    double mean = 0.0;
    for (double d : diff) mean += d;
    mean /= static_cast<double>(diff.size());
    double gap = 0.0;
    for (double d : diff) gap = std::max(gap, std::fabs(d - mean));
    const double rel = gap / sup_ref;
    c.require(rel <= 1e-4, "relative deviation from constant " + num(rel) + " > 1e-4");
    c.finish(5.0);
}

// 2. Sine-kernel annihilation of its characteristic modes.
void criterion_annihilation() {
    Criterion c(2, "sine-kernel mode annihilation (eps = 0.25)");
    const ScaledKernel kernel = scale(make_kernel("sine"), 0.25);
    for (int n : {0, 2, -2, 3, -3, 4, -4}) {
        const double r = annihilation_residual(kernel, n);
        c.require(r <= 1e-8, "mode n=" + std::to_string(n) + " residual " + num(r) + " > 1e-8");
    }
    for (int n : {1, -1}) {
        const double r = annihilation_residual(kernel, n);
        c.require(r > 1e-2, "mode n=" + std::to_string(n) + " residual " + num(r) +
                                " not above 1e-2");
    }
    c.finish(10.0);
}

// 3. Zeros of the scaled symbol sit at the unscaled zeros over epsilon.
void criterion_zero_scaling() {
    Criterion c(3, "zero scaling (sine kernel, first three zeros)");
    const SweepReport report =
        zero_scaling_sweep(make_kernel("sine"), {1.0, 0.5, 0.25, 0.125}, 2.0);
    const double targets[] = {1.0, 1.5, 2.0};
    const ZeroSet raw = find_zeros(make_kernel("sine"), 2.0);
    for (int j = 0; j < 3; ++j)
        c.require(std::fabs(raw.zeros[j + 1].xi - targets[j]) <= 1e-9,
                  "unscaled zero " + num(raw.zeros[j + 1].xi) + " != " + num(targets[j]));
    for (int j = 1; j <= 3; ++j)
        for (double offset : report.errors.at("offset_j" + std::to_string(j)))
            c.require(offset <= 1e-9,
                      "offset " + num(offset) + " > 1e-9 for zero j=" + std::to_string(j));
    c.finish(5.0);
}

// 4. Certified first-order bound plus the observed second-order decay.
void criterion_taylor_bound() {
    Criterion c(4, "derivative error bound and fitted order (gaussian, indicator kernel)");
    std::vector<double> epsilons;
    for (int k = 0; k <= 8; ++k) epsilons.push_back(std::pow(2.0, -k));
    const SweepReport report = derivative_sweep(
        make_kernel("indicator"), [](double t) { return std::exp(-t * t); },
        [](double t) { return -2.0 * t * std::exp(-t * t); }, 2.0, epsilons, -4.0, 4.0, 201);
    for (std::size_t i = 0; i < report.bound_checks.size(); ++i)
        c.require(report.bound_checks[i],
                  "bound violated at eps=" + num(report.epsilons[i]));
    c.require(!report.floor_limited, "sweep hit the quadrature floor");
    c.require(report.fitted_order >= 1.8,
              "fitted order " + num(report.fitted_order) + " < 1.8");
    c.finish(30.0);
}

// 5. Two-sided small-frequency sandwich on the symbol.
void criterion_near_field() {
    Criterion c(5, "near-field sandwich (exponential kernel)");
    const KernelProfile kernel = make_kernel("exponential");
    const double constant = near_field_constant(kernel);
    c.require(std::fabs(constant - 8.0 * std::pow(M_PI, 3)) <= 1e-10 * constant,
              "constant " + num(constant) + " != 8 pi^3");
    std::vector<double> xis;
    for (int i = 0; i <= 400; ++i) xis.push_back(-10.0 + 20.0 * i / 400.0);
    for (double eps : {1.0, 0.1}) {
        const BoundCertificate cert = near_field_certificate(scale(kernel, eps), xis, 1e-10);
        for (const BoundCheck& check : cert.checks)
            c.require(check.ok, "eps=" + num(eps) + " xi=" + num(check.xi) + ": " +
                                    num(check.lower) + " <= " + num(check.value) +
                                    " <= " + num(check.upper) + " fails");
    }
    c.finish(1.0);
}

// 6. Large-frequency lower bound for the singular power kernel.
void criterion_far_field() {
    Criterion c(6, "far-field lower bound (power kernel, k = -1.5, eps = 0.1)");
    const ScaledKernel kernel = scale(builtin_kernel(BuiltinKernel::power, -1.5), 0.1);
    std::vector<double> xis;
    for (int i = 0; i < 100; ++i) xis.push_back(5.0 + i);  // all >= 1/(2 eps b)
    const BoundCertificate cert = far_field_certificate(kernel, xis, 1e-9);
    c.require(cert.far_constant > 0.0, "far-field constant not positive");
    for (const BoundCheck& check : cert.checks)
        c.require(check.ok, "xi=" + num(check.xi) + ": value " + num(check.value) +
                                " below bound " + num(check.lower));
    c.finish(10.0);
}

// 7. Strong L2 convergence of the solve for a singular kernel.
void criterion_strong_convergence() {
    Criterion c(7, "strong L2 convergence (power kernel, k = -1.5, gaussian data)");
    std::vector<double> epsilons;
    for (int k = 1; k <= 6; ++k) epsilons.push_back(std::pow(2.0, -k));
    SolverConfig cfg;
    cfg.compute_residual = false;
    const double p_norms[] = {2.0};
    const SweepReport report = antiderivative_sweep(
        builtin_kernel(BuiltinKernel::power, -1.5),
        [](double t) { return std::exp(-t * t); },
        [](double t) { return std::sqrt(M_PI) / 2.0 * std::erf(t); }, epsilons, p_norms,
        20.0, 1 << 12, 16.0, cfg);
    const auto& l2 = report.errors.at("L2");
    for (std::size_t i = 0; i + 1 < l2.size(); ++i)
        c.require(l2[i + 1] < l2[i], "L2 not strictly decreasing at step " +
                                         std::to_string(i) + " (" + num(l2[i]) + " -> " +
                                         num(l2[i + 1]) + ")");
    c.require(l2.back() <= 0.05 * l2.front(),
              "final/initial " + num(l2.back() / l2.front()) + " > 0.05");
    c.finish(60.0);
}

// 8. Weak pairings of the first annihilated mode vanish as epsilon shrinks.
void criterion_weak_decay() {
    Criterion c(8, "weak pairing decay of the first annihilated mode (sine kernel)");
    const auto& bumps = bump_catalogue();
    auto pairing_magnitude = [&](double eps, const std::function<double(double)>& bump) {
        const double xi = 1.0 / eps;  // first nonzero zero of the scaled symbol
        const GridFunction re = GridFunction::sample(-2.0, 2.0, 1 << 12, [&](double t) {
            return std::cos(2.0 * M_PI * xi * t);
        });
        const GridFunction im = GridFunction::sample(-2.0, 2.0, 1 << 12, [&](double t) {
            return std::sin(2.0 * M_PI * xi * t);
        });
        const GridFunction psi = GridFunction::sample(-2.0, 2.0, 1 << 12, bump);
        return std::hypot(weak_pairing(re, psi), weak_pairing(im, psi));
    };
    for (std::size_t b = 0; b < bumps.size(); ++b) {
        const double coarse = pairing_magnitude(1.0, bumps[b]);
        const double fine = pairing_magnitude(1.0 / 16.0, bumps[b]);
        c.require(fine <= 0.1 * coarse, "bump " + std::to_string(b + 1) + ": |(mode,psi)| " +
                                            num(fine) + " not <= 0.1 * " + num(coarse));
    }
    c.finish(5.0);
}

// 9. Square-root profile curves approach the classical derivative monotonically.
void criterion_figure() {
    Criterion c(9, "square-root profile: monotone approach on 1/2 <= |t| <= 3");
    const FigureDataset data = figure_sqrt_curves({1.0, 0.5, 0.25}, -3.0, 3.0, 241);
    std::vector<double> sup_gap(3, 0.0);
    for (std::size_t e = 0; e < 3; ++e)
        for (std::size_t i = 0; i < data.t.size(); ++i) {
            if (std::fabs(data.t[i]) < 0.5) continue;
            sup_gap[e] =
                std::max(sup_gap[e], std::fabs(data.curves[e][i] - data.classical[i]));
        }
    c.require(sup_gap[1] < sup_gap[0], "eps 1 -> 1/2: " + num(sup_gap[0]) + " -> " +
                                           num(sup_gap[1]) + " not decreasing");
    c.require(sup_gap[2] < sup_gap[1], "eps 1/2 -> 1/4: " + num(sup_gap[1]) + " -> " +
                                           num(sup_gap[2]) + " not decreasing");
    c.finish(10.0);
}

// 10. Operator algebra: annihilation of constants, exactness on the identity,
//     skew-adjointness, linearity.
void criterion_operator_algebra() {
    Criterion c(10, "operator algebra (constants, identity, skew-adjointness, linearity)");
    const ScaledKernel kernel = scale(make_kernel("indicator"), 0.5);
    std::vector<double> points;
    for (int i = 0; i <= 40; ++i) points.push_back(-2.0 + 0.1 * i);

    for (double v : apply(kernel, [](double) { return -3.7; }, points))
        c.require(std::fabs(v) <= 1e-10, "constant residual " + num(std::fabs(v)));
    for (double v : apply(kernel, [](double t) { return t; }, points))
        c.require(std::fabs(v - 1.0) <= 1e-10, "identity deviation " + num(std::fabs(v - 1.0)));

    const auto& bumps = bump_catalogue();
    const double a = -8.0, b = 8.0;
    const std::size_t n = 1 << 12;
    const GridFunction psi = GridFunction::sample(a, b, n, bumps[0]);
    const GridFunction phi = GridFunction::sample(a, b, n, bumps[2]);
    const GridFunction dpsi = apply_grid(kernel, bumps[0], a, b, n);
    const GridFunction dphi = apply_grid(kernel, bumps[2], a, b, n);
    const double skew = weak_pairing(dpsi, phi) + weak_pairing(psi, dphi);
    c.require(std::fabs(skew) <= 1e-8, "skew-adjointness defect " + num(std::fabs(skew)));

    auto u = [](double t) { return std::exp(-t * t); };
    auto v = [](double t) { return std::sin(3.0 * t); };
    const double ca = 2.0, cb = -1.5;
    const auto mix = apply(kernel, [&](double t) { return ca * u(t) + cb * v(t); }, points);
    const auto du = apply(kernel, u, points);
    const auto dv = apply(kernel, v, points);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double defect = std::fabs(mix[i] - ca * du[i] - cb * dv[i]);
        c.require(defect <= 1e-10, "linearity defect " + num(defect));
    }
    c.finish(5.0);
}

} // namespace

int main() {
    criterion_closed_form_solve();
    criterion_annihilation();
    criterion_zero_scaling();
    criterion_taylor_bound();
    criterion_near_field();
    criterion_far_field();
    criterion_strong_convergence();
    criterion_weak_decay();
    criterion_figure();
    criterion_operator_algebra();
    if (failures == 0) {
        std::printf("all criteria passed\n");
    } else {
        std::printf("%d criteria failed\n", failures);
    }
    return failures;
}
