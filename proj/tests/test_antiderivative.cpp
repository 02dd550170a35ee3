#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "nlcalc/antiderivative.hpp"
#include "nlcalc/derivative.hpp"

using namespace nlcalc;

namespace {

double runge(double t) { return 1.0 / (1.0 + t * t); }

/// sup deviation from the best constant, over samples with |t| <= limit
double constant_gap(const GridFunction& u, const std::function<double(double)>& ref,
                    double limit) {
    std::vector<double> diff;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (std::fabs(u.point(i)) <= limit) diff.push_back(u[i] - ref(u.point(i)));
    double mean = 0.0;
    for (double d : diff) mean += d;
    mean /= static_cast<double>(diff.size());
    double sup = 0.0;
    for (double d : diff) sup = std::max(sup, std::fabs(d - mean));
    return sup;
}

} // namespace

TEST_CASE("exponential kernel reproduces the closed-form antiderivative") {
    const double eps = 0.1;
    const ScaledKernel kernel = scale(make_kernel("exponential"), eps);
    const GridFunction F = GridFunction::sample(-40.0, 40.0, 1 << 14, runge);
    SolverConfig cfg;
    cfg.compute_residual = false;
    const AntiderivativeResult result = solve(kernel, F, cfg);

    auto reference = [&](double t) { return closed_form_reference("exp-arctan", eps, t); };
    const double gap = constant_gap(result.particular, reference, 10.0);
    CHECK(gap / std::atan(10.0) < 1e-6);  // well under the 1e-4 target

    REQUIRE(!result.null_modes.empty());
    bool has_constant = false;
    for (const NullMode& m : result.null_modes)
        if (m.xi == 0.0 && m.degree == 0) has_constant = true;
    CHECK(has_constant);
    CHECK(result.null_modes.size() == 1);  // spectrum positive away from zero
}

TEST_CASE("zero right-hand side returns the constant of the policy") {
    const ScaledKernel kernel = scale(make_kernel("exponential"), 0.2);
    const GridFunction F = GridFunction::sample(-8.0, 8.0, 1 << 10, [](double) { return 0.0; });
    SolverConfig cfg;
    cfg.compute_residual = false;

    const AntiderivativeResult zero_mean = solve(kernel, F, cfg);
    for (double v : zero_mean.particular.values()) CHECK(std::fabs(v) <= 1e-12);

    cfg.policy = ConstantPolicy::fixed_value;
    cfg.fixed_constant = 2.5;
    const AntiderivativeResult fixed = solve(kernel, F, cfg);
    for (double v : fixed.particular.values())
        CHECK(v == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("constant policies differ by exactly a constant") {
    const ScaledKernel kernel = scale(make_kernel("exponential"), 0.15);
    const GridFunction F =
        GridFunction::sample(-12.0, 12.0, 1 << 11, [](double t) { return std::exp(-t * t); });
    SolverConfig cfg;
    cfg.compute_residual = false;
    const AntiderivativeResult a = solve(kernel, F, cfg);
    cfg.policy = ConstantPolicy::fixed_value;
    cfg.fixed_constant = -1.75;
    const AntiderivativeResult b = solve(kernel, F, cfg);

    const double offset = b.particular[0] - a.particular[0];
    for (std::size_t i = 0; i < F.size(); ++i)
        CHECK(std::fabs(b.particular[i] - a.particular[i] - offset) <= 1e-10);
}

TEST_CASE("round trip: derivative of the solve reproduces the data") {
    const ScaledKernel kernel = scale(make_kernel("exponential"), 0.2);
    const GridFunction F =
        GridFunction::sample(-20.0, 20.0, 1 << 12, [](double t) { return std::exp(-t * t); });
    SolverConfig cfg;
    cfg.residual_samples = 512;
    const AntiderivativeResult result = solve(kernel, F, cfg);
    CHECK(result.residual <= 1e-6);  // sup|F| = 1
}

TEST_CASE("sine kernel: suppressed bins match the homogeneous basis") {
    const double eps = 0.25;
    const double half_width = 20.0;
    const std::size_t n = 1 << 12;
    const ScaledKernel kernel = scale(make_kernel("sine"), eps);
    const GridFunction F =
        GridFunction::sample(-half_width, half_width, n, [](double t) { return std::exp(-t * t); });
    SolverConfig cfg;
    cfg.compute_residual = false;
    const AntiderivativeResult result = solve(kernel, F, cfg);

    const double nyquist = static_cast<double>(n) / (4.0 * half_width);
    const std::vector<NullMode> basis = homogeneous_basis(make_kernel("sine"), eps, nyquist);

    // one-bin tolerance in both directions
    const double bin = 1.0 / (2.0 * half_width);
    for (const NullMode& mode : basis) {
        bool matched = false;
        for (const NullMode& found : result.null_modes)
            if (std::fabs(found.xi - mode.xi) <= bin) matched = true;
        CHECK_MESSAGE(matched, "basis mode ", mode.xi, " not suppressed");
    }
    for (const NullMode& found : result.null_modes) {
        bool matched = false;
        for (const NullMode& mode : basis)
            if (std::fabs(found.xi - mode.xi) <= bin) matched = true;
        CHECK_MESSAGE(matched, "suppressed bin ", found.xi, " not in the basis");
    }

    // the first few suppressed frequencies sit at 4, 6, 8
    std::vector<double> positive;
    for (const NullMode& m : result.null_modes)
        if (m.xi > 0.0) positive.push_back(m.xi);
    std::sort(positive.begin(), positive.end());
    REQUIRE(positive.size() >= 3);
    CHECK(positive[0] == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(positive[1] == doctest::Approx(6.0).epsilon(1e-9));
    CHECK(positive[2] == doctest::Approx(8.0).epsilon(1e-9));
}

TEST_CASE("homogeneous basis per kernel") {
    const std::vector<NullMode> exp_basis =
        homogeneous_basis(make_kernel("exponential"), 0.3, 50.0);
    REQUIRE(exp_basis.size() == 1);
    CHECK(exp_basis[0].xi == 0.0);
    CHECK(exp_basis[0].degree == 0);

    const std::vector<NullMode> sine_basis = homogeneous_basis(make_kernel("sine"), 0.25, 10.0);
    std::vector<double> xis;
    for (const NullMode& m : sine_basis) xis.push_back(m.xi);
    const std::vector<double> expected = {-8.0, -6.0, -4.0, 0.0, 4.0, 6.0, 8.0};
    REQUIRE(xis.size() == expected.size());
    for (std::size_t i = 0; i < xis.size(); ++i)
        CHECK(xis[i] == doctest::Approx(expected[i]).epsilon(1e-9));

    // window below the first nonzero zero
    const std::vector<NullMode> tight = homogeneous_basis(make_kernel("sine"), 0.25, 3.0);
    REQUIRE(tight.size() == 1);
    CHECK(tight[0].xi == 0.0);
}

TEST_CASE("closed-form references") {
    CHECK(closed_form_reference("exp-arctan", 0.0, 1.0) == doctest::Approx(M_PI / 4.0));
    CHECK(closed_form_reference("exp-arctan", 0.5, 1.0) ==
          doctest::Approx(M_PI / 4.0 + 0.125).epsilon(1e-14));
    CHECK_THROWS_AS(closed_form_reference("unknown", 0.1, 0.0), std::invalid_argument);

    // the general identity specializes to the named case: -eps^2 F' matches
    // the 2 eps^2 t/(1+t^2)^2 correction for the runge data
    auto F_prime = [](double t) {
        const double d = 1.0 + t * t;
        return -2.0 * t / (d * d);
    };
    for (double t : {-2.0, 0.3, 1.0, 5.0}) {
        const double eps = 0.37;
        CHECK(exponential_kernel_reference([](double x) { return std::atan(x); }, F_prime,
                                           eps, t) ==
              doctest::Approx(closed_form_reference("exp-arctan", eps, t)).epsilon(1e-13));
    }
}

TEST_CASE("solver validates its inputs") {
    const ScaledKernel kernel = scale(make_kernel("exponential"), 0.2);
    // asymmetric domain
    const GridFunction shifted =
        GridFunction::sample(0.0, 8.0, 1 << 8, [](double) { return 0.0; });
    CHECK_THROWS_AS(solve(kernel, shifted), std::invalid_argument);

    // boundary decay violated: strict mode throws, lax mode records
    const GridFunction ramp =
        GridFunction::sample(-4.0, 4.0, 1 << 8, [](double t) { return 1.0 + 0.1 * t; });
    CHECK_THROWS_AS(solve(kernel, ramp), std::domain_error);
    SolverConfig lax;
    lax.strict_boundary = false;
    lax.compute_residual = false;
    CHECK(solve(kernel, ramp, lax).boundary_ratio > 0.5);
}

TEST_CASE("smoothness shift from the gauge exponent") {
    CHECK(smoothness_shift(make_kernel("exponential")) == doctest::Approx(2.0));
    CHECK(smoothness_shift(builtin_kernel(BuiltinKernel::power, -1.5)) ==
          doctest::Approx(-0.5));
    CHECK(smoothness_shift(builtin_kernel(BuiltinKernel::power, -1.0 + 1e-12)) ==
          doctest::Approx(0.0).epsilon(1e-9));
    CHECK_THROWS_AS(smoothness_shift(make_kernel("sine")), std::domain_error);
}

TEST_CASE("result serializes with config echo") {
    const ScaledKernel kernel = scale(make_kernel("exponential"), 0.25);
    const GridFunction F =
        GridFunction::sample(-8.0, 8.0, 1 << 9, [](double t) { return std::exp(-t * t); });
    SolverConfig cfg;
    cfg.compute_residual = false;
    const AntiderivativeResult result = solve(kernel, F, cfg);
    const std::string json = to_json(result, "exponential", 0.25, cfg);
    CHECK(json.find("\"null_modes\"") != std::string::npos);
    CHECK(json.find("\"null_threshold\"") != std::string::npos);
    CHECK(json.find("\"kernel\": \"exponential\"") != std::string::npos);
}
