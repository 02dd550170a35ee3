#include "nlcalc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

namespace nlcalc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sgn(double s) { return s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0); }

double factorial(int j) {
    double f = 1.0;
    for (int i = 2; i <= j; ++i) f *= i;
    return f;
}

/// Upper integration limit for s^j |k(s)| on an unbounded support: walk out
/// until the integrand drops below 1e-16 of its running peak.
double truncation_limit(const KernelProfile& k, int j, const QuadratureConfig& cfg) {
    double peak = 0.0;
    double s = 0.5;
    double limit = cfg.truncation_window;
    while (s < 1000.0) {
        const double v = std::pow(s, j) * std::fabs(k(s));
        peak = std::max(peak, v);
        if (s >= limit && v < 1e-16 * peak) return s;
        s += 0.5;
    }
    return 1000.0;
}

} // namespace

struct KernelProfile::MomentCache {
    std::mutex mutex;
    std::map<std::pair<int, bool>, double> values;
};

KernelProfile::KernelProfile(std::string name, std::function<double(double)> profile,
                             double support_radius, DecayClass decay,
                             std::optional<Flatness> flatness)
    : name_(std::move(name)),
      profile_(std::move(profile)),
      support_radius_(support_radius),
      decay_(decay),
      flatness_(flatness),
      cache_(std::make_shared<MomentCache>()) {
    if (flatness_) {
        const Flatness& f = *flatness_;
        const bool singular = f.kind == FlatnessCase::singular;
        if (singular && !(f.exponent > -2.0 && f.exponent < 0.0))
            throw std::invalid_argument("KernelProfile: singular gauge exponent must be in (-2, 0)");
        if (!singular && !(f.exponent > 0.0))
            throw std::invalid_argument("KernelProfile: finite-limit gauge exponent must be positive");
        if (!(f.gauge_radius > 0.0) || !(f.coeff_lower > 0.0) || !(f.coeff_upper > 0.0))
            throw std::invalid_argument("KernelProfile: gauge radius and coefficients must be positive");
    }
}

bool KernelProfile::has_compact_support() const {
    return decay_ == DecayClass::compact && std::isfinite(support_radius_);
}

double KernelProfile::cached_moment(int j, bool absolute,
                                    const std::function<double()>& compute) const {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto key = std::make_pair(j, absolute);
    auto it = cache_->values.find(key);
    if (it == cache_->values.end())
        it = cache_->values.emplace(key, compute()).first;
    return it->second;
}

double ScaledKernel::effective_radius(const QuadratureConfig& cfg) const {
    if (base_.has_compact_support())
        return epsilon_ * base_.support_radius();
    return epsilon_ * truncation_limit(base_, 0, cfg);
}

KernelProfile builtin_kernel(BuiltinKernel which, double power_exponent) {
    switch (which) {
        case BuiltinKernel::indicator:
            return KernelProfile("indicator",
                                 [](double s) { return std::fabs(s) < 1.0 ? s : 0.0; },
                                 1.0, DecayClass::compact);
        case BuiltinKernel::exponential:
            return KernelProfile("exponential",
                                 [](double s) { return sgn(s) * std::exp(-std::fabs(s)); },
                                 kInf, DecayClass::exponential_type,
                                 Flatness{FlatnessCase::finite_limit, 1.0, 1.0,
                                          1.0 - std::exp(-1.0), 1.0});
        case BuiltinKernel::sine:
            return KernelProfile("sine",
                                 [](double s) { return std::fabs(s) < 1.0 ? std::sin(M_PI * s) : 0.0; },
                                 1.0, DecayClass::compact);
        case BuiltinKernel::power: {
            const double k = power_exponent;
            if (!((k > -2.0 && k < 0.0) || k > 0.0))
                throw std::invalid_argument(
                    "builtin_kernel: power exponent must lie in (-2,0) or (0,inf)");
            KernelProfile profile(
                "power",
                [k](double s) {
                    const double r = std::fabs(s);
                    return (r > 0.0 && r < 1.0) ? sgn(s) * std::pow(r, k) : 0.0;
                },
                1.0, DecayClass::compact,
                Flatness{k < 0.0 ? FlatnessCase::singular : FlatnessCase::finite_limit,
                         k, 1.0, 1.0, 1.0});
            profile.set_parameters({{"k_alpha", k}});
            return profile;
        }
    }
    throw std::invalid_argument("builtin_kernel: unknown kernel");
}

KernelProfile make_kernel(const std::string& name,
                          const std::map<std::string, double>& params) {
    if (name == "indicator") return builtin_kernel(BuiltinKernel::indicator);
    if (name == "exponential") return builtin_kernel(BuiltinKernel::exponential);
    if (name == "sine") return builtin_kernel(BuiltinKernel::sine);
    if (name == "power") {
        auto it = params.find("k_alpha");
        if (it == params.end())
            throw std::invalid_argument("make_kernel: power kernel needs k_alpha");
        return builtin_kernel(BuiltinKernel::power, it->second);
    }
    throw std::invalid_argument("make_kernel: unknown kernel '" + name + "'");
}

KernelProfile tabulated_kernel(const std::string& name,
                               std::vector<std::pair<double, double>> samples,
                               double support_radius,
                               std::optional<Flatness> flatness) {
    if (samples.size() < 4)
        throw std::invalid_argument("tabulated_kernel: need at least 4 samples");
    std::sort(samples.begin(), samples.end());
    if (!(samples.front().first > 0.0))
        throw std::invalid_argument("tabulated_kernel: abscissae must be positive");
    auto table = std::make_shared<std::vector<std::pair<double, double>>>(std::move(samples));
    auto eval = [table, support_radius](double s) {
        const double r = std::fabs(s);
        if (r == 0.0 || r > support_radius) return 0.0;
        const auto& tab = *table;
        if (r >= tab.back().first) return sgn(s) * tab.back().second;
        // 4-point Lagrange around the bracketing interval, clamped at the ends.
        auto it = std::upper_bound(tab.begin(), tab.end(), std::make_pair(r, kInf));
        std::size_t i = static_cast<std::size_t>(it - tab.begin());
        std::size_t lo = (i >= 2) ? i - 2 : 0;
        lo = std::min(lo, tab.size() - 4);
        double value = 0.0;
        for (std::size_t p = lo; p < lo + 4; ++p) {
            double weight = 1.0;
            for (std::size_t q = lo; q < lo + 4; ++q) {
                if (q == p) continue;
                weight *= (r - tab[q].first) / (tab[p].first - tab[q].first);
            }
            value += weight * tab[p].second;
        }
        return sgn(s) * value;
    };
    return KernelProfile(name, eval, support_radius,
                         std::isfinite(support_radius) ? DecayClass::compact
                                                       : DecayClass::exponential_type,
                         flatness);
}

double moment(const KernelProfile& k, int j, bool absolute, const QuadratureConfig& cfg) {
    if (j < 0) throw std::invalid_argument("moment: order must be nonnegative");
    if (!absolute && j % 2 == 0) return 0.0;  // odd integrand, exact

    return k.cached_moment(j, absolute, [&]() {
        const auto& flat = k.flatness();
        const bool singular = flat && flat->kind == FlatnessCase::singular;
        if (singular && j + flat->exponent <= -1.0)
            throw std::domain_error("moment: integral diverges at the origin");

        auto integrand = [&](double s) {
            const double v = k(s);
            return std::pow(s, j) * (absolute ? std::fabs(v) : v);
        };
        const double limit = k.has_compact_support() ? k.support_radius()
                                                     : truncation_limit(k, j, cfg);
        double total = 0.0;
        double lower = 0.0;
        if (singular) {
            const double cut = std::min(limit, flat->gauge_radius);
            total += integrate_graded(integrand, cut, grading_exponent(j + flat->exponent), cfg);
            lower = cut;
        }
        if (lower < limit)
            total += integrate_split(integrand, lower, limit, {k.support_radius()}, cfg);
        return 2.0 * total;
    });
}

ScaledKernel scale(const KernelProfile& k, double epsilon, const QuadratureConfig& cfg) {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("scale: epsilon must be positive");
    const double m1 = moment(k, 1, false, cfg);
    if (!std::isfinite(m1) || m1 == 0.0)
        throw std::domain_error("scale: first moment must be finite and nonzero");
    return ScaledKernel(k, epsilon, 1.0 / (epsilon * epsilon * m1));
}

AdmissibilityReport check_admissibility(const KernelProfile& k, const CheckConfig& cfg) {
    AdmissibilityReport report;
    QuadratureConfig quad;
    quad.tolerance = std::min(1e-13, cfg.tolerance);

    const double span = k.has_compact_support() ? k.support_radius()
                                                : truncation_limit(k, 0, quad);
    const int m = cfg.grid_samples;

    // Anti-symmetry, relative to the local magnitude.
    double violation = 0.0;
    for (int i = 0; i < m; ++i) {
        const double s = span * (i + 0.5) / m;
        violation = std::max(violation,
                             std::fabs(k(s) + k(-s)) / std::max(1.0, std::fabs(k(s))));
    }
    report.antisymmetry_violation = violation;
    report.antisymmetry_ok = violation <= cfg.tolerance;

    // First moment.
    try {
        report.first_moment = moment(k, 1, false, quad);
        report.dipole_ok = std::isfinite(report.first_moment) &&
                           std::fabs(report.first_moment) > 1e-12;
    } catch (const std::exception&) {
        report.dipole_ok = false;
    }

    // Factorial-growth surrogate: |k|_(j) <= A j! with A fitted at j = 1.
    try {
        report.factorial_ratios.clear();
        for (int j = 1; j <= cfg.max_factorial_order; ++j)
            report.factorial_ratios.push_back(moment(k, j, true, quad) / factorial(j));
        report.analytic_constant = report.factorial_ratios.front();
        report.analytic_class_ok = true;
        for (double r : report.factorial_ratios)
            if (!(r <= report.analytic_constant * (1.0 + 1e-9)))
                report.analytic_class_ok = false;
    } catch (const std::exception&) {
        report.analytic_class_ok = false;
    }

    // Positivity: the positive branch nonnegative, nonincreasing, and
    // strictly decreasing on most of (0, a) with a = support radius for
    // compact kernels and 1 otherwise.
    {
        const double a = k.has_compact_support() ? k.support_radius() : 1.0;
        bool nonneg = true, nonincreasing = true;
        int strict = 0, strict_window = 0;
        double prev = k(span * 0.5 / m);
        if (prev < -cfg.tolerance) nonneg = false;
        for (int i = 1; i < m; ++i) {
            const double s = span * (i + 0.5) / m;
            const double beta = k(s);
            const double scale = std::max(1.0, std::fabs(prev));
            if (beta < -cfg.tolerance * scale) nonneg = false;
            if (beta > prev + cfg.tolerance * scale) nonincreasing = false;
            if (s < a) {
                ++strict_window;
                if (prev - beta > 1e-14 * scale) ++strict;
            }
            prev = beta;
        }
        report.positivity_ok =
            nonneg && nonincreasing &&
            strict_window > 0 && strict >= cfg.strict_fraction * strict_window;
    }

    // Power-gauge sandwich plus the cross inequality on (0, 1).
    report.has_flatness = k.flatness().has_value();
    if (report.has_flatness) {
        const Flatness& f = *k.flatness();
        const double slack = 1e-9;
        bool ok = true;
        if (f.kind == FlatnessCase::finite_limit) {
            const double limit0 = k(std::min(1e-9, 1e-6 * f.gauge_radius));
            for (int i = 0; i < m && ok; ++i) {
                const double s = f.gauge_radius * (i + 0.5) / m;
                const double dev = k(s) - limit0;
                const double gauge = std::pow(s, f.exponent);
                const double tol = slack * f.coeff_lower * gauge;
                if (dev < -f.coeff_lower * gauge - tol) ok = false;
                if (dev > -f.coeff_upper * gauge + tol) ok = false;
            }
            for (int i = 0; i < m && ok; ++i) {
                const double s = (i + 0.5) / m;
                if (f.coeff_upper * std::pow(s + 1.0, f.exponent) -
                        f.coeff_lower * std::pow(s, f.exponent) < -slack)
                    ok = false;
            }
        } else {
            for (int i = 0; i < m && ok; ++i) {
                const double s = f.gauge_radius * (i + 0.5) / m;
                const double gauge = std::pow(s, f.exponent);
                const double tol = slack * f.coeff_upper * gauge;
                if (k(s) < f.coeff_lower * gauge - tol) ok = false;
                if (k(s) > f.coeff_upper * gauge + tol) ok = false;
            }
            for (int i = 0; i < m && ok; ++i) {
                const double s = (i + 0.5) / m;
                if (f.coeff_lower * std::pow(s, f.exponent) -
                        f.coeff_upper * std::pow(s + 1.0, f.exponent) < -slack)
                    ok = false;
            }
        }
        report.flatness_ok = ok;
    }

    return report;
}

} // namespace nlcalc
