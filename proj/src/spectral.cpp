#include "nlcalc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nlcalc/parallel.hpp"
#include <json.hpp>

namespace nlcalc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

double sgn(double s) { return s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0); }

/// x - sin(x) without cancellation for small |x|.
double x_minus_sin(double x) {
    if (std::fabs(x) >= 0.5) return x - std::sin(x);
    double term = x * x * x / 6.0;
    double sum = term;
    const double x2 = x * x;
    for (int n = 2; n < 24; ++n) {
        term *= -x2 / ((2 * n) * (2 * n + 1));
        sum += term;
        if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
    }
    return sum;
}

/// (sin a - a cos a) / a^2, series-safe near a = 0.
double sine_minus_cosine_ratio(double a) {
    if (std::fabs(a) >= 2.0) return (std::sin(a) - a * std::cos(a)) / (a * a);
    // sum_{n>=1} (-1)^{n+1} (2n) a^{2n-1} / (2n+1)!
    double term = a / 3.0;
    double sum = term;
    const double a2 = a * a;
    for (int n = 2; n < 30; ++n) {
        term *= -a2 * (2.0 * n) / ((2.0 * n - 2.0) * (2.0 * n) * (2.0 * n + 1.0));
        sum += term;
        if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
    }
    return sum;
}

/// a - 3 * sine_minus_cosine_ratio(a), series-safe near a = 0.
double indicator_gap_core(double a) {
    if (std::fabs(a) >= 2.0) return a - 3.0 * sine_minus_cosine_ratio(a);
    // sum_{n>=2} (-1)^n 6n a^{2n-1} / (2n+1)!
    double term = a * a * a / 10.0;
    double sum = term;
    const double a2 = a * a;
    for (int n = 3; n < 30; ++n) {
        term *= -a2 * (2.0 * n) / ((2.0 * n - 2.0) * (2.0 * n) * (2.0 * n + 1.0));
        sum += term;
        if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
    }
    return sum;
}

double sinc(double z) {
    if (std::fabs(z) < 1e-4) return 1.0 - z * z / 6.0;
    return std::sin(z) / z;
}

bool has_closed_form(const KernelProfile& k) {
    return k.name() == "indicator" || k.name() == "exponential" || k.name() == "sine";
}

double truncation_radius(const KernelProfile& k) {
    if (k.has_compact_support()) return k.support_radius();
    return 40.0;  // e-type profiles decay below 4e-18 of their scale by then
}

/// 2 * integral_0^inf sin(2 pi y s) k(s) ds for the raw profile, by
/// quadrature: graded panel across an algebraic origin, quarter-period
/// panels elsewhere, split at the support edge.
double raw_symbol_quadrature(const KernelProfile& k, double y, const QuadratureConfig& cfg) {
    if (y == 0.0) return 0.0;
    const double ay = std::fabs(y);
    const double z = 2.0 * M_PI * ay;
    const double limit = truncation_radius(k);
    auto integrand = [&](double s) { return std::sin(z * s) * k(s); };

    double total = 0.0;
    double lower = 0.0;
    const auto& flat = k.flatness();
    if (flat && flat->kind == FlatnessCase::singular) {
        const double cut = std::min(limit, flat->gauge_radius);
        total += integrate_graded(integrand, cut, grading_exponent(flat->exponent + 1.0), cfg);
        lower = cut;
    }
    if (lower < limit) {
        const double period = std::min(1.0 / ay, limit - lower);
        const double edge = k.support_radius();
        if (std::isfinite(edge) && edge > lower && edge < limit) {
            total += integrate_oscillatory(integrand, lower, edge, period, cfg);
            total += integrate_oscillatory(integrand, edge, limit, period, cfg);
        } else {
            total += integrate_oscillatory(integrand, lower, limit, period, cfg);
        }
    }
    return 2.0 * sgn(y) * total;
}

/// 2 * integral_0^inf [2 pi y s - sin(2 pi y s)] k(s) ds, the
/// cancellation-free counterpart used for the classical gap.
double raw_gap_quadrature(const KernelProfile& k, double y, const QuadratureConfig& cfg) {
    if (y == 0.0) return 0.0;
    const double ay = std::fabs(y);
    const double z = 2.0 * M_PI * ay;
    const double limit = truncation_radius(k);
    auto integrand = [&](double s) { return x_minus_sin(z * s) * k(s); };

    double total = 0.0;
    double lower = 0.0;
    const auto& flat = k.flatness();
    if (flat && flat->kind == FlatnessCase::singular) {
        const double cut = std::min(limit, flat->gauge_radius);
        total += integrate_graded(integrand, cut, grading_exponent(flat->exponent + 3.0), cfg);
        lower = cut;
    }
    if (lower < limit) {
        const double period = std::min(1.0 / ay, limit - lower);
        const double edge = k.support_radius();
        if (std::isfinite(edge) && edge > lower && edge < limit) {
            total += integrate_oscillatory(integrand, lower, edge, period, cfg);
            total += integrate_oscillatory(integrand, edge, limit, period, cfg);
        } else {
            total += integrate_oscillatory(integrand, lower, limit, period, cfg);
        }
    }
    return 2.0 * sgn(y) * total;
}

double raw_symbol(const KernelProfile& k, double y, const QuadratureConfig& cfg) {
    if (k.name() == "exponential") {
        return 4.0 * M_PI * y / (1.0 + 4.0 * M_PI * M_PI * y * y);
    }
    if (k.name() == "sine") {
        const double ay = std::fabs(y);
        if (std::fabs(ay - 0.5) < 0.05) {
            const double u = ay - 0.5;  // removable point of the closed form
            return sgn(y) * sinc(2.0 * M_PI * u) / (u + 1.0);
        }
        return (2.0 / M_PI) * std::sin(2.0 * M_PI * y) / (1.0 - 4.0 * y * y);
    }
    if (k.name() == "indicator") {
        return 2.0 * sine_minus_cosine_ratio(2.0 * M_PI * y);
    }
    return raw_symbol_quadrature(k, y, cfg);
}

double raw_gap(const KernelProfile& k, double y, const QuadratureConfig& cfg) {
    if (k.name() == "exponential") {
        const double z2 = 4.0 * M_PI * M_PI * y * y;
        return 4.0 * M_PI * y * z2 / (1.0 + z2);
    }
    if (k.name() == "sine") {
        const double z = 2.0 * M_PI * y;
        return (2.0 / M_PI) * (x_minus_sin(z) - M_PI * 4.0 * y * y * y) /
               (1.0 - 4.0 * y * y);
    }
    if (k.name() == "indicator") {
        return (2.0 / 3.0) * indicator_gap_core(2.0 * M_PI * y);
    }
    return raw_gap_quadrature(k, y, cfg);
}

} // namespace

KernelSpectrum::KernelSpectrum(ScaledKernel source, QuadratureConfig cfg)
    : source_(std::move(source)),
      form_(has_closed_form(source_.base()) ? SpectrumForm::closed_form
                                            : SpectrumForm::quadrature),
      cfg_(cfg),
      first_moment_(moment(source_.base(), 1, false, cfg)) {}

double KernelSpectrum::operator()(double xi) const {
    const double eps = source_.epsilon();
    return raw_symbol(source_.base(), eps * xi, cfg_) / (eps * first_moment_);
}

double KernelSpectrum::classical_gap(double xi) const {
    const double eps = source_.epsilon();
    return raw_gap(source_.base(), eps * xi, cfg_) / (eps * first_moment_);
}

double KernelSpectrum::quadrature_value(double xi) const {
    const double eps = source_.epsilon();
    return raw_symbol_quadrature(source_.base(), eps * xi, cfg_) / (eps * first_moment_);
}

double transform(const ScaledKernel& kernel, double xi, const QuadratureConfig& cfg) {
    return KernelSpectrum(kernel, cfg)(xi);
}

double unscaled_transform(const KernelProfile& kernel, double xi, const QuadratureConfig& cfg) {
    return raw_symbol(kernel, xi, cfg);
}

namespace detail {

namespace {

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double flo, double tol) {
    for (int iter = 0; iter < 200 && hi - lo > tol * std::max(1.0, std::fabs(lo)); ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double refine_abs_min(const std::function<double(double)>& f, double lo, double hi) {
    // golden-section on |f|
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double f1 = std::fabs(f(x1)), f2 = std::fabs(f(x2));
    for (int iter = 0; iter < 120 && hi - lo > 1e-13 * std::max(1.0, std::fabs(lo)); ++iter) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = std::fabs(f(x1));
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = std::fabs(f(x2));
        }
    }
    return 0.5 * (lo + hi);
}

int estimate_multiplicity(const std::function<double(double)>& f, double root,
                          double scale, bool sign_change) {
    if (!sign_change) return 2;  // |f| touch point
    const double delta = 1e-4 * std::max(1.0, std::fabs(root));
    const double d1 = (f(root + delta) - f(root - delta)) / (2.0 * delta);
    return std::fabs(d1) >= 1e-6 * std::max(1.0, scale) ? 1 : 3;
}

} // namespace

ZeroSet locate_zeros(const std::function<double(double)>& f, double window,
                     int resolution, double tol) {
    if (!(window > 0.0)) throw std::invalid_argument("locate_zeros: window must be positive");
    if (resolution < 2) throw std::invalid_argument("locate_zeros: resolution too small");

    const double step = 1.0 / resolution;
    const std::size_t n = static_cast<std::size_t>(std::ceil(window * resolution)) + 2;
    std::vector<double> xs(n + 1), fs(n + 1);
    for (std::size_t i = 0; i <= n; ++i) xs[i] = step * static_cast<double>(i);
    parallel_for(n + 1, [&](std::size_t i) { fs[i] = f(xs[i]); });

    double scale = 0.0;
    for (double v : fs) scale = std::max(scale, std::fabs(v));

    ZeroSet result;
    result.window = window;

    std::vector<std::pair<double, bool>> roots;  // (position, had sign change)
    roots.emplace_back(0.0, true);
    for (std::size_t i = 1; i < n; ++i) {
        if (fs[i] == 0.0) {
            roots.emplace_back(xs[i], true);
        } else if (fs[i + 1] != 0.0 && (fs[i] > 0.0) != (fs[i + 1] > 0.0)) {
            roots.emplace_back(bisect(f, xs[i], xs[i + 1], fs[i], tol), true);
        }
    }
    // Even-multiplicity touch points: local minima of |f| without a sign
    // change, refined and accepted only when |f| actually reaches zero.
    for (std::size_t i = 2; i < n - 1; ++i) {
        const double ai = std::fabs(fs[i]);
        if (ai >= std::fabs(fs[i - 1]) || ai >= std::fabs(fs[i + 1])) continue;
        if ((fs[i - 1] > 0.0) != (fs[i + 1] > 0.0)) continue;
        if (ai > 1e-4 * std::max(1.0, scale)) continue;
        const double candidate = refine_abs_min(f, xs[i - 1], xs[i + 1]);
        if (std::fabs(f(candidate)) <= 1e-10 * std::max(1.0, scale))
            roots.emplace_back(candidate, false);
    }

    std::sort(roots.begin(), roots.end());
    const double merge_tol = 10.0 * tol * std::max(1.0, window);
    for (const auto& [x, sign_change] : roots) {
        if (x > window + 1e-9 * std::max(1.0, window)) continue;
        if (!result.zeros.empty() && x - result.zeros.back().xi < merge_tol) continue;
        Zero z;
        z.xi = x;
        z.multiplicity = estimate_multiplicity(f, x, scale, sign_change);
        result.zeros.push_back(z);
    }
    return result;
}

} // namespace detail

ZeroSet find_zeros(const KernelProfile& kernel, double window, int resolution,
                   double tol, const QuadratureConfig& cfg) {
    return detail::locate_zeros([&](double xi) { return raw_symbol(kernel, xi, cfg); },
                                window, resolution, tol);
}

ZeroSet find_scaled_zeros(const ScaledKernel& kernel, double window, int resolution,
                          double tol, const QuadratureConfig& cfg) {
    KernelSpectrum spectrum(kernel, cfg);
    return detail::locate_zeros([&](double xi) { return spectrum(xi); },
                                window, resolution, tol);
}

double near_field_constant(const KernelProfile& kernel, const QuadratureConfig& cfg) {
    const double m1 = moment(kernel, 1, false, cfg);
    const double m3 = moment(kernel, 3, false, cfg);
    return 4.0 * std::pow(M_PI, 3) * m3 / (3.0 * m1);
}

double far_field_constant(const KernelProfile& kernel, const QuadratureConfig& cfg) {
    const auto& flat = kernel.flatness();
    if (!flat)
        throw std::domain_error("far_field_constant: kernel has no power-gauge record");
    const double k = flat->exponent;
    const double kp = flat->coeff_upper;
    const double km = flat->coeff_lower;
    double bracket_integral;
    if (flat->kind == FlatnessCase::finite_limit) {
        bracket_integral = integrate(
            [&](double s) {
                return std::sin(M_PI * s) *
                       (kp * std::pow(s + 1.0, k) - km * std::pow(s, k));
            },
            0.0, 1.0, cfg);
    } else {
        bracket_integral = integrate_graded(
            [&](double s) {
                return std::sin(M_PI * s) *
                       (km * std::pow(s, k) - kp * std::pow(s + 1.0, k));
            },
            1.0, grading_exponent(k + 1.0), cfg);
    }
    const double m1 = moment(kernel, 1, false, cfg);
    return bracket_integral / (std::pow(2.0, k) * m1);
}

double positivity_margin(const KernelProfile& kernel, const QuadratureConfig& cfg) {
    const auto& flat = kernel.flatness();
    if (!flat)
        throw std::domain_error("positivity_margin: kernel has no power-gauge record");
    const double b = flat->gauge_radius;
    return 2.0 * M_PI * b - near_field_constant(kernel, cfg) / (4.0 * b);
}

BoundCertificate near_field_certificate(const ScaledKernel& kernel,
                                        std::span<const double> xis,
                                        double rel_tol, const QuadratureConfig& cfg) {
    BoundCertificate cert;
    cert.kernel = kernel.base().name();
    cert.epsilon = kernel.epsilon();
    cert.near_constant = near_field_constant(kernel.base(), cfg);
    const auto& flat = kernel.base().flatness();
    cert.far_constant = flat ? far_field_constant(kernel.base(), cfg) : kNaN;
    cert.positivity_margin = flat ? positivity_margin(kernel.base(), cfg) : kNaN;

    KernelSpectrum spectrum(kernel, cfg);
    const double eps = kernel.epsilon();
    cert.checks.resize(xis.size());
    parallel_for(xis.size(), [&](std::size_t i) {
        const double axi = std::fabs(xis[i]);
        BoundCheck check;
        check.xi = xis[i];
        check.upper = 2.0 * M_PI * axi;
        check.lower = check.upper - cert.near_constant * eps * eps * axi * axi * axi;
        check.value = spectrum(axi);
        const double slack = rel_tol * std::max({1.0, std::fabs(check.upper), std::fabs(check.lower)});
        check.ok = check.value >= check.lower - slack && check.value <= check.upper + slack;
        cert.checks[i] = check;
    });
    cert.all_ok = std::all_of(cert.checks.begin(), cert.checks.end(),
                              [](const BoundCheck& c) { return c.ok; });
    return cert;
}

BoundCertificate far_field_certificate(const ScaledKernel& kernel,
                                       std::span<const double> xis,
                                       double rel_tol, const QuadratureConfig& cfg) {
    const auto& flat = kernel.base().flatness();
    if (!flat)
        throw std::domain_error("far_field_certificate: kernel has no power-gauge record");
    const double eps = kernel.epsilon();
    const double threshold = 1.0 / (2.0 * eps * flat->gauge_radius);
    for (double xi : xis)
        if (std::fabs(xi) < threshold * (1.0 - 1e-12))
            throw std::domain_error("far_field_certificate: probe inside the near-field region");

    BoundCertificate cert;
    cert.kernel = kernel.base().name();
    cert.epsilon = eps;
    cert.near_constant = near_field_constant(kernel.base(), cfg);
    cert.far_constant = far_field_constant(kernel.base(), cfg);
    cert.positivity_margin = positivity_margin(kernel.base(), cfg);

    KernelSpectrum spectrum(kernel, cfg);
    const double k = flat->exponent;
    cert.checks.resize(xis.size());
    parallel_for(xis.size(), [&](std::size_t i) {
        const double axi = std::fabs(xis[i]);
        BoundCheck check;
        check.xi = xis[i];
        check.lower = cert.far_constant * std::pow(eps, -2.0 - k) * std::pow(axi, -1.0 - k);
        check.upper = kInf;
        check.value = spectrum(axi);
        const double slack = rel_tol * std::max(1.0, std::fabs(check.lower));
        check.ok = check.value >= check.lower - slack;
        cert.checks[i] = check;
    });
    cert.all_ok = std::all_of(cert.checks.begin(), cert.checks.end(),
                              [](const BoundCheck& c) { return c.ok; });
    return cert;
}

double spectral_correction(const KernelSpectrum& spectrum, double xi) {
    if (xi == 0.0)
        throw std::invalid_argument("spectral_correction: xi must be nonzero");
    const double value = spectrum(xi);
    if (std::fabs(value) <= 1e-12 * std::max(1.0, 2.0 * M_PI * std::fabs(xi)))
        throw std::domain_error("spectral_correction: evaluated at a spectrum zero");
    // 2 pi / T - 1 / xi == (2 pi xi - T) / (xi T), with the numerator from
    // the cancellation-free gap.
    return spectrum.classical_gap(xi) / (xi * value);
}

double spectral_correction(const ScaledKernel& kernel, double xi, const QuadratureConfig& cfg) {
    return spectral_correction(KernelSpectrum(kernel, cfg), xi);
}

std::string to_json(const ZeroSet& zeros, const std::string& kernel, double epsilon) {
    nlohmann::ordered_json j;
    j["kernel"] = kernel;
    j["epsilon"] = epsilon;
    j["window"] = zeros.window;
    j["zeros"] = nlohmann::ordered_json::array();
    for (const Zero& z : zeros.zeros)
        j["zeros"].push_back({{"xi", z.xi}, {"multiplicity", z.multiplicity}});
    return j.dump(2);
}

std::string to_json(const BoundCertificate& cert) {
    nlohmann::ordered_json j;
    j["kernel"] = cert.kernel;
    j["epsilon"] = cert.epsilon;
    j["near_constant"] = cert.near_constant;
    j["far_constant"] = cert.far_constant;
    j["positivity_margin"] = cert.positivity_margin;
    j["all_ok"] = cert.all_ok;
    j["checks"] = nlohmann::ordered_json::array();
    for (const BoundCheck& c : cert.checks)
        j["checks"].push_back({{"xi", c.xi},
                               {"lower", c.lower},
                               {"value", c.value},
                               {"upper", c.upper},
                               {"ok", c.ok}});
    return j.dump(2);
}

} // namespace nlcalc
