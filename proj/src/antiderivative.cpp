#include "nlcalc/antiderivative.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>
#include <json.hpp>

#include "nlcalc/derivative.hpp"
#include "nlcalc/parallel.hpp"
#include "nlcalc/spectral.hpp"

namespace nlcalc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// The FFTW planner is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftPlan {
    fftw_plan plan;
    fftw_complex* data;
    std::size_t n;

    FftPlan(std::size_t n_, int direction) : n(n_) {
        std::lock_guard<std::mutex> lock(planner_mutex());
        data = fftw_alloc_complex(n);
        plan = fftw_plan_dft_1d(static_cast<int>(n), data, data, direction, FFTW_ESTIMATE);
    }
    ~FftPlan() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
        fftw_free(data);
    }
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;
};

double sign_flip(std::size_t k) { return (k % 2 == 0) ? 1.0 : -1.0; }

} // namespace

AntiderivativeResult solve(const ScaledKernel& kernel, const GridFunction& F,
                           const SolverConfig& cfg) {
    const std::size_t n = F.size();
    const double half_width = F.b();
    if (std::fabs(F.a() + F.b()) > 1e-12 * std::fabs(F.b()))
        throw std::invalid_argument("solve: grid must cover a symmetric domain [-T, T)");
    if (!(cfg.null_threshold > 0.0 && cfg.null_threshold < 1.0))
        throw std::invalid_argument("solve: null threshold must lie in (0, 1)");

    double sup_f = 0.0, edge = std::fabs(F[0]);
    for (double v : F.values()) sup_f = std::max(sup_f, std::fabs(v));
    edge = std::max(edge, std::fabs(F[n - 1]));
    const double boundary_ratio = sup_f > 0.0 ? edge / sup_f : 0.0;
    if (cfg.strict_boundary && boundary_ratio > cfg.boundary_tolerance)
        throw std::domain_error("solve: right-hand side does not decay at the boundary");

    const double h = F.spacing();
    const double two_t = 2.0 * half_width;

    // Forward transform with the continuous convention.
    FftPlan forward(n, FFTW_FORWARD);
    for (std::size_t i = 0; i < n; ++i) {
        forward.data[i][0] = F[i];
        forward.data[i][1] = 0.0;
    }
    fftw_execute(forward.plan);
    std::vector<std::complex<double>> f_hat(n);
    for (std::size_t k = 0; k < n; ++k)
        f_hat[k] = h * sign_flip(k) *
                   std::complex<double>(forward.data[k][0], forward.data[k][1]);

    // Kernel symbol on the signed frequency grid; odd symmetry halves the work.
    KernelSpectrum spectrum(kernel, cfg.quadrature);
    std::vector<double> symbol(n, 0.0);
    parallel_for(n / 2 - 1, [&](std::size_t i) {
        const std::size_t k = i + 1;
        symbol[k] = spectrum(static_cast<double>(k) / two_t);
        symbol[n - k] = -symbol[k];
    });
    symbol[n / 2] = spectrum(static_cast<double>(n / 2) / two_t);

    double max_symbol = 0.0;
    for (double g : symbol) max_symbol = std::max(max_symbol, std::fabs(g));
    if (max_symbol == 0.0)
        throw std::domain_error("solve: kernel symbol vanishes on every bin");
    const double cutoff = cfg.null_threshold * max_symbol;

    // Division, with null bins suppressed. The Nyquist bin has no conjugate
    // partner and is dropped as well.
    std::vector<bool> null_bin(n, false);
    FftPlan backward(n, FFTW_BACKWARD);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> u_hat(0.0, 0.0);
        null_bin[k] = std::fabs(symbol[k]) <= cutoff;
        if (k != 0 && k != n / 2 && !null_bin[k])
            u_hat = f_hat[k] * std::complex<double>(0.0, -1.0 / symbol[k]);
        u_hat *= sign_flip(k);
        backward.data[k][0] = u_hat.real();
        backward.data[k][1] = u_hat.imag();
    }
    fftw_execute(backward.plan);

    // The zero bin's content returns as an exact ramp: D maps t to 1, so the
    // grid mean of F is matched by mean * t in real space.
    const double mean_f = f_hat[0].real() / two_t;
    std::vector<double> u(n);
    const double norm = 1.0 / (h * static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        u[i] = backward.data[i][0] * norm + mean_f * F.point(i);

    double shift = 0.0;
    for (double v : u) shift += v;
    shift /= static_cast<double>(n);
    if (cfg.policy == ConstantPolicy::fixed_value) shift -= cfg.fixed_constant;
    for (double& v : u) v -= shift;

    AntiderivativeResult result{GridFunction(F.a(), F.b(), std::move(u)), {}, kNaN,
                                boundary_ratio};

    // Suppressed clusters -> one annihilated mode each, at the weakest bin.
    auto signed_index = [&](std::size_t pos) { return (pos + n / 2 + 1) % n; };
    std::size_t pos = 0;
    while (pos < n) {
        if (!null_bin[signed_index(pos)]) {
            ++pos;
            continue;
        }
        std::size_t best = signed_index(pos);
        std::size_t end = pos;
        while (end < n && null_bin[signed_index(end)]) {
            const std::size_t k = signed_index(end);
            if (std::fabs(symbol[k]) < std::fabs(symbol[best])) best = k;
            ++end;
        }
        const double xi = (best < n / 2 ? static_cast<double>(best)
                                        : static_cast<double>(best) - static_cast<double>(n)) /
                          two_t;
        result.null_modes.push_back({xi, 0});
        pos = end;
    }
    std::sort(result.null_modes.begin(), result.null_modes.end(),
              [](const NullMode& a, const NullMode& b) { return a.xi < b.xi; });

    if (cfg.compute_residual) {
        const double window = kernel.effective_radius(cfg.quadrature);
        const double margin = window + 2.0 * h;
        std::vector<double> points;
        std::vector<double> rhs;
        const std::size_t stride =
            std::max<std::size_t>(1, n / std::max<std::size_t>(1, cfg.residual_samples));
        for (std::size_t i = 0; i < n; i += stride) {
            const double t = F.point(i);
            if (t - margin < F.min_point() || t + margin > F.max_point()) continue;
            points.push_back(t);
            rhs.push_back(F[i]);
        }
        if (!points.empty()) {
            const std::vector<double> lhs =
                apply(kernel, result.particular, points, cfg.quadrature);
            double sup = 0.0;
            for (std::size_t i = 0; i < points.size(); ++i)
                sup = std::max(sup, std::fabs(lhs[i] - rhs[i]));
            result.residual = sup;
        }
    }
    return result;
}

std::vector<NullMode> homogeneous_basis(const KernelProfile& kernel, double epsilon,
                                        double window, int resolution,
                                        const QuadratureConfig& cfg) {
    if (!(epsilon > 0.0) || !(window > 0.0))
        throw std::invalid_argument("homogeneous_basis: epsilon and window must be positive");
    const ZeroSet raw = find_zeros(kernel, window * epsilon, resolution, 1e-12, cfg);
    const double margin = 1e-9 * std::max(1.0, window);
    std::vector<NullMode> modes;
    for (const Zero& z : raw.zeros) {
        const double scaled = z.xi / epsilon;
        if (scaled >= window - margin && z.xi != 0.0) continue;
        for (int d = 0; d < z.multiplicity; ++d) {
            modes.push_back({scaled, d});
            if (z.xi != 0.0) modes.push_back({-scaled, d});
        }
    }
    std::sort(modes.begin(), modes.end(), [](const NullMode& a, const NullMode& b) {
        return a.xi != b.xi ? a.xi < b.xi : a.degree < b.degree;
    });
    return modes;
}

double closed_form_reference(const std::string& name, double epsilon, double t) {
    if (name == "exp-arctan") {
        const double d = 1.0 + t * t;
        return std::atan(t) + 2.0 * epsilon * epsilon * t / (d * d);
    }
    throw std::invalid_argument("closed_form_reference: unknown reference '" + name + "'");
}

double exponential_kernel_reference(const std::function<double(double)>& F_antiderivative,
                                    const std::function<double(double)>& F_prime,
                                    double epsilon, double t) {
    return F_antiderivative(t) - epsilon * epsilon * F_prime(t);
}

double smoothness_shift(const KernelProfile& kernel) {
    const auto& flat = kernel.flatness();
    if (!flat)
        throw std::domain_error("smoothness_shift: kernel has no power-gauge record");
    return 1.0 + flat->exponent;
}

std::string to_json(const AntiderivativeResult& result, const std::string& kernel,
                    double epsilon, const SolverConfig& cfg) {
    nlohmann::ordered_json j;
    j["kernel"] = kernel;
    j["epsilon"] = epsilon;
    j["config"]["null_threshold"] = cfg.null_threshold;
    j["config"]["constant_policy"] =
        cfg.policy == ConstantPolicy::zero_mean ? "zero-mean" : "fixed-value";
    if (cfg.policy == ConstantPolicy::fixed_value)
        j["config"]["fixed_constant"] = cfg.fixed_constant;
    j["config"]["strict_boundary"] = cfg.strict_boundary;
    j["config"]["boundary_tolerance"] = cfg.boundary_tolerance;
    j["null_modes"] = nlohmann::ordered_json::array();
    for (const NullMode& mode : result.null_modes)
        j["null_modes"].push_back({{"xi", mode.xi}, {"k", mode.degree}});
    j["residual"] = result.residual;
    j["boundary_ratio"] = result.boundary_ratio;
    return j.dump(2);
}

} // namespace nlcalc
