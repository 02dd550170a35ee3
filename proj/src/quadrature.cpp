#include "nlcalc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <queue>
#include <stdexcept>

namespace nlcalc {

namespace {

GaussRule compute_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double fac = M_PI / (0.5 + n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Newton iteration on P_n(z), starting from the Chebyshev-like guess.
        double z = std::cos((i + 0.75) * fac);
        double pp = 0.0, dz;
        do {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2 * j - 1) * z * p2 - (j - 1) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            dz = -p1 / pp;
            z += dz;
        } while (std::fabs(dz) >= std::numeric_limits<double>::epsilon());
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    return rule;
}

double panel(const std::function<double(double)>& f, double a, double b,
             const GaussRule& rule) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return sum * half;
}

struct PanelEstimate {
    double a = 0.0;
    double b = 0.0;
    double value = 0.0;
    double error = 0.0;
    bool operator<(const PanelEstimate& other) const { return error < other.error; }
};

PanelEstimate estimate(const std::function<double(double)>& f, double a, double b,
                       const GaussRule& rule) {
    const double whole = panel(f, a, b, rule);
    const double mid = 0.5 * (a + b);
    const double halves = panel(f, a, mid, rule) + panel(f, mid, b, rule);
    return {a, b, halves, std::fabs(whole - halves)};
}

/// Global-error refinement: keep bisecting the panel with the largest
/// whole-vs-halves discrepancy until the summed estimate meets the target
/// or nothing refinable above roundoff remains.
double adaptive(const std::function<double(double)>& f, double a, double b,
                double tol, const GaussRule& rule, int budget) {
    std::priority_queue<PanelEstimate> heap;
    PanelEstimate root = estimate(f, a, b, rule);
    double total = root.value;
    double total_error = root.error;
    heap.push(root);
    int used = 1;
    while (total_error > std::max(tol, 1e-15 * std::fabs(total))) {
        const PanelEstimate worst = heap.top();
        if (worst.error <= 1e-16 * std::max(1.0, std::fabs(total)))
            break;  // refinement is below roundoff
        if (used + 2 > budget)
            throw std::runtime_error("quadrature: panel budget exhausted");
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const PanelEstimate left = estimate(f, worst.a, mid, rule);
        const PanelEstimate right = estimate(f, mid, worst.b, rule);
        used += 2;
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    return total;
}

} // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 2) throw std::invalid_argument("gauss_legendre: order must be >= 2");
    static std::map<int, GaussRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, compute_rule(n)).first;
    return it->second;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& cfg) {
    if (a == b) return 0.0;
    const GaussRule& rule = gauss_legendre(cfg.points);
    return adaptive(f, a, b, cfg.tolerance, rule, cfg.panel_budget);
}

double integrate_split(const std::function<double(double)>& f, double a, double b,
                       std::vector<double> breakpoints, const QuadratureConfig& cfg) {
    breakpoints.push_back(a);
    breakpoints.push_back(b);
    std::sort(breakpoints.begin(), breakpoints.end());
    double total = 0.0;
    double prev = a;
    for (double x : breakpoints) {
        if (x <= prev || x > b) continue;
        total += integrate(f, prev, x, cfg);
        prev = x;
    }
    return total;
}

double integrate_oscillatory(const std::function<double(double)>& f, double a, double b,
                             double period, const QuadratureConfig& cfg) {
    if (a == b) return 0.0;
    if (!(period > 0.0))
        throw std::invalid_argument("integrate_oscillatory: period must be positive");
    const double width = b - a;
    int panels = static_cast<int>(std::ceil(width / (0.25 * period)));
    panels = std::clamp(panels, 1, cfg.panel_budget);
    const GaussRule& rule = gauss_legendre(cfg.points);
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double lo = a + width * i / panels;
        const double hi = a + width * (i + 1) / panels;
        total += panel(f, lo, hi, rule);
    }
    return total;
}

double integrate_graded(const std::function<double(double)>& f, double b, int q,
                        const QuadratureConfig& cfg) {
    if (!(b > 0.0)) throw std::invalid_argument("integrate_graded: b must be positive");
    if (q < 1) throw std::invalid_argument("integrate_graded: q must be >= 1");
    auto substituted = [&](double w) {
        const double s = b * std::pow(w, q);
        return f(s) * b * q * std::pow(w, q - 1);
    };
    return integrate(substituted, 0.0, 1.0, cfg);
}

int grading_exponent(double p) {
    if (!(p > -1.0))
        throw std::domain_error("grading_exponent: integrand not integrable (p <= -1)");
    return std::max(1, static_cast<int>(std::ceil(6.0 / (p + 1.0))));
}

} // namespace nlcalc
