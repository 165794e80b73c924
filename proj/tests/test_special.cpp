#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tmd/errors.hpp"
#include "tmd/numerics.hpp"
#include "tmd/special.hpp"

using namespace tmd;
using std::numbers::pi;

TEST_CASE("kummer series") {
    CHECK(kummer_1f1(0.3 + 0.1 * I, 0.5, 0.0).value == cplx(1.0));
    CHECK(std::abs(kummer_1f1(0.0, 1.5, 4.0 * I).value - 1.0) == 0.0);
    auto v = kummer_1f1(1.0, 1.0, I);
    CHECK(std::abs(v.value - std::exp(I)) < 1e-12);
    CHECK(v.truncation_bound < 1e-15);
    // 1F1(1, 2, z) = (e^z - 1)/z
    cplx z(2.0, -3.0);
    CHECK(std::abs(kummer_1f1(1.0, 2.0, z).value - (std::exp(z) - 1.0) / z) < 1e-12);
    // Kummer transformation 1F1(a, b, z) = e^z 1F1(b - a, b, -z).
    cplx a(0.25, 1.0), b(0.5, 0.0), w(0.0, 5.0);
    CHECK(std::abs(kummer_1f1(a, b, w).value - std::exp(w) * kummer_1f1(b - a, b, -w).value) < 1e-11);
    CHECK_THROWS_AS(kummer_1f1(1.0, 1.0, 40.0), SeriesDivergence);
    CHECK_THROWS_AS(kummer_1f1(1.0, -2.0, 1.0), DomainError);
}

TEST_CASE("fresnel cosine integral") {
    CHECK(fresnel_c(0.0).value == cplx(0.0));
    CHECK(std::abs(fresnel_c(1.0).value.real() - 0.7798934) < 1e-6);
    for (double x : {0.3, 1.0, 2.2}) {
        double quad = integrate([](double s) { return std::cos(pi * s * s / 2); }, 0.0, x, 1e-14);
        CHECK(std::abs(fresnel_c(x).value.real() - quad) < 1e-11);
        CHECK(fresnel_c(-x).value.real() == doctest::Approx(-fresnel_c(x).value.real()));
    }
    CHECK_THROWS_AS(fresnel_c(10.0), SeriesDivergence);
}
