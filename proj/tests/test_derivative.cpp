#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "nlcalc/derivative.hpp"

using namespace nlcalc;

namespace {

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

} // namespace

TEST_CASE("constants are annihilated exactly") {
    const auto points = linspace(-2.0, 2.0, 17);
    for (const char* name : {"indicator", "exponential", "sine"}) {
        const ScaledKernel k = scale(make_kernel(name), 0.3);
        for (double v : apply(k, [](double) { return 4.2; }, points))
            CHECK(std::fabs(v) <= 1e-12);
    }
}

TEST_CASE("the identity map has derivative one") {
    const auto points = linspace(-1.0, 3.0, 9);
    for (const char* name : {"indicator", "exponential", "sine"}) {
        for (double eps : {1.0, 0.25}) {
            const ScaledKernel k = scale(make_kernel(name), eps);
            for (double v : apply(k, [](double t) { return t; }, points))
                CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
    // singular catalogue kernel as well
    const ScaledKernel p = scale(builtin_kernel(BuiltinKernel::power, -1.5), 0.5);
    for (double v : apply(p, [](double t) { return t; }, points))
        CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("application is linear") {
    const auto points = linspace(-1.5, 1.5, 11);
    const ScaledKernel k = scale(make_kernel("indicator"), 0.4);
    auto u = [](double t) { return std::exp(-t * t); };
    auto v = [](double t) { return std::sin(3.0 * t); };
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (int trial = 0; trial < 5; ++trial) {
        const double a = coeff(rng), b = coeff(rng);
        const auto lhs =
            apply(k, [&](double t) { return a * u(t) + b * v(t); }, points);
        const auto du = apply(k, u, points);
        const auto dv = apply(k, v, points);
        for (std::size_t i = 0; i < points.size(); ++i)
            CHECK(lhs[i] == doctest::Approx(a * du[i] + b * dv[i]).epsilon(1e-10));
    }
}

TEST_CASE("taylor bound constants") {
    const ScaledKernel indicator = scale(make_kernel("indicator"), 0.5);
    CHECK(taylor_bound(indicator, 1.0) == doctest::Approx(0.375 * 0.5).epsilon(1e-12));
    const ScaledKernel exponential = scale(make_kernel("exponential"), 0.25);
    CHECK(taylor_bound(exponential, 3.0) == doctest::Approx(0.25 * 3.0).epsilon(1e-12));
    CHECK(taylor_bound(exponential, 0.0) == 0.0);
}

TEST_CASE("taylor bound holds for a gaussian across a dyadic sweep") {
    auto psi = [](double t) { return std::exp(-t * t); };
    auto psi_prime = [](double t) { return -2.0 * t * std::exp(-t * t); };
    const auto points = linspace(-4.0, 4.0, 201);
    const KernelProfile indicator = make_kernel("indicator");
    const double sup_psi2 = 2.0;
    for (int j = 0; j <= 6; ++j) {
        const ScaledKernel k = scale(indicator, std::pow(2.0, -j));
        const auto applied = apply(k, psi, points);
        double sup = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i)
            sup = std::max(sup, std::fabs(applied[i] - psi_prime(points[i])));
        CHECK(sup <= taylor_bound(k, sup_psi2) * (1.0 + 1e-12));
    }
}

TEST_CASE("weak pairing values and symmetry") {
    const GridFunction zero =
        GridFunction::sample(-8.0, 8.0, 1 << 12, [](double) { return 0.0; });
    const GridFunction gauss =
        GridFunction::sample(-8.0, 8.0, 1 << 12, [](double t) { return std::exp(-t * t); });
    CHECK(weak_pairing(zero, gauss) == 0.0);
    CHECK(weak_pairing(gauss, gauss) ==
          doctest::Approx(std::sqrt(M_PI / 2.0)).epsilon(1e-12));
    const GridFunction mix =
        GridFunction::sample(-8.0, 8.0, 1 << 12, [](double t) { return t * std::exp(-t * t); });
    CHECK(weak_pairing(gauss, mix) == weak_pairing(mix, gauss));

    const GridFunction other =
        GridFunction::sample(-4.0, 4.0, 1 << 12, [](double) { return 1.0; });
    CHECK_THROWS_AS(weak_pairing(gauss, other), std::invalid_argument);
}

TEST_CASE("discrete skew-adjointness on compact bumps") {
    auto bump = [](double center) {
        return [center](double t) {
            const double x = t - center;
            return std::fabs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0;
        };
    };
    auto psi = bump(-0.2);
    auto phi = bump(0.3);

    const double a = -8.0, b = 8.0;
    const std::size_t n = 1 << 12;
    const ScaledKernel k = scale(make_kernel("indicator"), 0.5);

    const GridFunction psi_g = GridFunction::sample(a, b, n, psi);
    const GridFunction phi_g = GridFunction::sample(a, b, n, phi);
    const GridFunction dpsi = apply_grid(k, psi, a, b, n);
    const GridFunction dphi = apply_grid(k, phi, a, b, n);

    const double forward = weak_pairing(dpsi, phi_g);
    const double backward = weak_pairing(psi_g, dphi);
    CHECK(forward == doctest::Approx(-backward).epsilon(1e-8));
    CHECK(std::fabs(forward) > 1e-4);  // the pairing itself is not degenerate
}

TEST_CASE("derivative commutes with application on smooth functions") {
    const ScaledKernel k = scale(make_kernel("exponential"), 0.2);
    auto u = [](double t) { return std::exp(-t * t); };
    auto u_prime = [](double t) { return -2.0 * t * std::exp(-t * t); };
    const auto points = linspace(-1.0, 1.0, 9);
    const auto applied_prime = apply(k, u_prime, points);
    const double delta = 1e-4;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double plus[] = {points[i] + delta};
        const double minus[] = {points[i] - delta};
        const double fd =
            (apply(k, u, plus)[0] - apply(k, u, minus)[0]) / (2.0 * delta);
        CHECK(applied_prime[i] == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("square root profile approaches the classical derivative") {
    auto u = [](double t) { return std::sqrt(std::fabs(t)); };
    const double kinks[] = {0.0};
    const KernelProfile indicator = make_kernel("indicator");

    // odd kernel against the even profile vanishes at the kink
    for (double eps : {1.0, 0.5, 0.25}) {
        const double origin[] = {0.0};
        CHECK(std::fabs(apply(scale(indicator, eps), u, origin, {}, kinks)[0]) <= 1e-12);
    }

    // monotone approach at t = 1 toward the classical value 1/2
    double previous = 1e300;
    for (double eps : {1.0, 0.5, 0.25}) {
        const double one[] = {1.0};
        const double gap =
            std::fabs(apply(scale(indicator, eps), u, one, {}, kinks)[0] - 0.5);
        CHECK(gap < previous);
        previous = gap;
    }
}

TEST_CASE("sine kernel annihilates its characteristic modes") {
    const ScaledKernel k = scale(make_kernel("sine"), 0.25);
    CHECK(annihilation_residual(k, 0) <= 1e-12);
    for (int n : {2, -2, 3, -3, 4, -4})
        CHECK(annihilation_residual(k, n) <= 1e-8);
    // the half-frequency mode is *not* annihilated
    CHECK(annihilation_residual(k, 1) > 1e-2);
    CHECK(annihilation_residual(k, -1) > 1e-2);
    // its residual is the symbol magnitude at xi = 1/(2 eps), i.e.
    // pi/(2 eps), up to the phase coverage of the finite probe grid
    CHECK(annihilation_residual(k, 1) == doctest::Approx(M_PI / 0.5).epsilon(2e-3));
    CHECK(annihilation_residual(k, 1) <= M_PI / 0.5 * (1.0 + 1e-12));
}

TEST_CASE("grid input interpolates and guards its boundary") {
    const GridFunction u =
        GridFunction::sample(-4.0, 4.0, 1 << 10, [](double t) { return std::exp(-t * t); });
    const ScaledKernel k = scale(make_kernel("indicator"), 0.5);

    const auto points = linspace(-2.0, 2.0, 21);
    const auto from_grid = apply(k, u, points);
    const auto from_callable =
        apply(k, [](double t) { return std::exp(-t * t); }, points);
    for (std::size_t i = 0; i < points.size(); ++i)
        CHECK(from_grid[i] == doctest::Approx(from_callable[i]).epsilon(1e-8));

    const double edge[] = {3.8};
    CHECK_THROWS_AS(apply(k, u, edge), std::domain_error);
}
