#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tmd/errors.hpp"
#include "tmd/scenario.hpp"

using namespace tmd;
using std::numbers::pi;

TEST_CASE("case names round trip") {
    for (int k = 0; k <= static_cast<int>(CaseKind::Tabulated); ++k) {
        auto kind = static_cast<CaseKind>(k);
        CHECK(parse_case_name(case_name(kind)) == kind);
    }
    CHECK_THROWS(parse_case_name("Nope"));
}

TEST_CASE("eval_coeffs examples") {
    Scenario iso(IsotropicParams{pi / 4, 0.0, 0.0});
    for (double t : {0.0, 1.3, 7.0}) {
        auto c = eval_coeffs(iso, t);
        CHECK(c.w11 == doctest::Approx(0.5));
        CHECK(c.w22 == doctest::Approx(0.5));
        CHECK(std::abs(c.w12 - 0.5) < 1e-15);
        CHECK(c.w21() == std::conj(c.w12));
    }
    auto c = eval_coeffs(Scenario(LogRhoParams{1.0, 1.0, 1.0, 0.0, 0.0}), 0.0);
    CHECK(c.w11 == doctest::Approx(0.5));
    CHECK(c.w22 == doctest::Approx(0.5));
    CHECK(std::abs(c.w12) == doctest::Approx(0.5));
    CHECK_THROWS_AS(eval_coeffs(iso, -0.1), DomainError);
}

TEST_CASE("tabulated lookup and validation") {
    std::vector<std::vector<double>> rows;
    for (int k = 0; k <= 20; ++k) {
        double t = 0.1 * k;
        rows.push_back({t, 1 + t, 2 - t, 0.1 * t, -0.2, 0.3, 0.4 * t, 0, 0, t * t});
    }
    Scenario sc(make_tabulated(rows));
    CHECK(sc.t_max() == doctest::Approx(2.0));
    for (int k : {0, 7, 20}) {
        auto c = eval_coeffs(sc, rows[k][0]);
        CHECK(c.w11 == doctest::Approx(rows[k][1]));
        CHECK(c.w22 == doctest::Approx(rows[k][2]));
        CHECK(std::abs(c.w12 - cplx(rows[k][3], rows[k][4])) < 1e-12);
        CHECK(std::abs(c.F1 - cplx(rows[k][5], rows[k][6])) < 1e-12);
        CHECK(c.B == doctest::Approx(rows[k][9]));
    }
    // alpha from quadrature of the linear columns: int (3) = 3t.
    CHECK(alpha_rho(sc, 1.5).alpha == doctest::Approx(4.5));
    CHECK_THROWS_AS(eval_coeffs(sc, 2.5), DomainError);

    auto bad = rows;
    bad[3][0] += 0.01;
    CHECK_THROWS(make_tabulated(bad));
    CHECK_THROWS(make_tabulated({rows.begin(), rows.begin() + 3}));
}

TEST_CASE("eta") {
    Scenario iso(IsotropicParams{pi / 4, 0.0, 0.0});
    CHECK(std::abs(eta(iso, 2.0) - cplx(0.0, -0.5)) < 1e-15);
    Scenario lin(LinearPhaseParams{1.0, 0.0, 0.0, 0.0, 0.0});
    CHECK(std::abs(eta(lin, 1.7) - 1.0) < 1e-15);
    Scenario zero(AllConstantParams{0.4, 0.1, 0.0});
    CHECK(eta(zero, 1.0) == cplx(0.0));

    std::vector<Scenario> all = {
        Scenario(ConstantPhaseParams{0.7, 0.2, 0.3, -0.1}),
        Scenario(LinearPhaseParams{1.0, 0.5, 0.3, 0.2, 0.0}),
        Scenario(GeneralPhaseParams{1.0, 1.0, 0.0, 1.0, 0.2, 0.4, 0.1}),
        Scenario(RhoConstantParams{pi / 6, std::sqrt(3.0) / 2, 1.0, 0.2, -0.1}),
        Scenario(LogRhoParams{1.0, 1.0, 1.0, 0.0, 0.0}),
        Scenario(QuadraticPhaseParams{1.0, 0.5, 0.3, 0.0})};
    for (const auto& sc : all)
        for (double t : {0.0, 0.4, 1.1})
            CHECK(std::abs(eta(sc, t)) == doctest::Approx(std::abs(eval_coeffs(sc, t).w12)));
}

TEST_CASE("alpha_rho") {
    Scenario iso(IsotropicParams{pi / 4, 0.0, 0.0});
    auto z = alpha_rho(iso, 0.0);
    CHECK(z.alpha == 0.0);
    CHECK(z.rho == 0.0);
    auto a = alpha_rho(iso, 3.0);
    CHECK(a.alpha == doctest::Approx(3.0));
    CHECK(std::abs(a.rho) < 1e-15);
    auto b = alpha_rho(Scenario(AllConstantParams{0.7, 0.3, {0.25, 0.1}}), 2.0);
    CHECK(b.alpha == doctest::Approx(2.0));
    CHECK(b.rho == doctest::Approx(0.8));
    // Analytic LogRho integrals against quadrature of the coefficients.
    Scenario lr(LogRhoParams{0.5, 1.0, 2.0, 0.0, 0.0});
    double q = integrate([&](double s) {
        auto c = eval_coeffs(lr, s);
        return c.w11 - c.w22;
    }, 0.0, 2.0);
    CHECK(alpha_rho(lr, 2.0).rho == doctest::Approx(q).epsilon(1e-12));
}

TEST_CASE("phase condition") {
    auto grid = uniform_grid(3.0, 31);
    Scenario cp(ConstantPhaseParams{1.0, 0.4, 0.2, 0.0});
    auto r = check_phase_condition(cp, grid);
    CHECK(r.satisfied);
    CHECK(r.max_violation < 1e-12);

    Scenario ac(AllConstantParams{0.7, 0.3, {0.25, 0.1}});
    auto v = check_phase_condition(ac, grid, constant_phase_reference(ac));
    CHECK_FALSE(v.satisfied);
    CHECK(v.max_violation > 0.1);
    CHECK_FALSE(v.violating_times.empty());

    Scenario rc(RhoConstantParams{pi / 6, std::sqrt(3.0) / 2, 1.0, 0.0, 0.0});
    CHECK(check_phase_condition(rc, grid).satisfied);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(Scenario(RhoConstantParams{0.0, 1.0, 1.0, 0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(Scenario(RhoConstantParams{pi / 2, 1.0, 1.0, 0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(Scenario(LogRhoParams{0.0, 1.0, 1.0, 0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(Scenario(QuadraticPhaseParams{1.0, 0.0, 0.0, 0.0}), DomainError);
    // dphi/ds = 1 - 0.4 s vanishes at s = 2.5; the domain stops there.
    Scenario gp(GeneralPhaseParams{1.0, 1.0, 0.0, 1.0, -0.2, 0.0, 0.0});
    CHECK(gp.t_max() == doctest::Approx(2.5));
    CHECK_THROWS_AS(eval_coeffs(gp, 3.0), DomainError);
}

TEST_CASE("isotropic family phase derivative") {
    // d arg(eta)/ds = (w0 / 2 eta0) sin(2 rho_m(s)), from finite differences of eta.
    for (const auto& sc : {Scenario(RhoConstantParams{pi / 6, std::sqrt(3.0) / 2, 1.0, 0.3, -0.2}),
                           Scenario(LogRhoParams{0.5, 0.8, 1.3, 0.1, 0.4})}) {
        const double h = 1e-5;
        for (double t : {0.2, 1.0, 2.5}) {
            double d = std::arg(eta(sc, t + h) / eta(sc, t - h)) / (2 * h);
            CHECK(d == doctest::Approx(phase_derivative(sc, t)).epsilon(1e-7));
        }
    }
}

TEST_CASE("general phase reduces to linear phase") {
    Scenario gp(GeneralPhaseParams{1.0, 0.7, 0.3, 0.7, 0.0, 0.2, 0.1});
    Scenario lp(LinearPhaseParams{1.0, 0.7, 0.3, 0.2, 0.1});
    for (double t : {0.0, 0.5, 2.0}) {
        auto a = eval_coeffs(gp, t), b = eval_coeffs(lp, t);
        CHECK(std::abs(a.w12 - b.w12) < 1e-14);
    }
}

TEST_CASE("drives") {
    Drives d{Drive::sinusoid(0.1, 1.0, 0.5), Drive::constant({0.0, 0.2}), Drive::constant(0.3)};
    Scenario sc(AllConstantParams{0.7, 0.3, 0.0}, d);
    CHECK(sc.has_drive());
    auto c = eval_coeffs(sc, 2.0);
    CHECK(std::abs(c.F1 - 0.1 * std::exp(I * 2.5)) < 1e-15);
    CHECK(std::abs(c.F2 - cplx(0.0, 0.2)) < 1e-15);
    CHECK(c.B == doctest::Approx(0.3));
    CHECK_FALSE(sc.with_drives({}).has_drive());
}
