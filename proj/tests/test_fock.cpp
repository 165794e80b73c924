#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tmd/errors.hpp"
#include "tmd/evolution.hpp"
#include "tmd/fock.hpp"
#include "tmd/oracle.hpp"

using namespace tmd;
using std::numbers::pi;

namespace {

// Max |A - B| over pairs of basis states with n1 + n2 <= limit.
double low_dev(const TwoModeOperator& a, const TwoModeOperator& b, int limit) {
    double d = 0.0;
    const auto& s = a.space;
    for (int i = 0; i < s.dim(); ++i)
        for (int j = 0; j < s.dim(); ++j) {
            auto [p, q] = s.occupations(i);
            auto [r, u] = s.occupations(j);
            if (p + q <= limit && r + u <= limit) d = std::max(d, std::abs(a.m(i, j) - b.m(i, j)));
        }
    return d;
}

}  // namespace

TEST_CASE("space dimensions and index map") {
    CHECK(make_space(1).dim() == 4);
    CHECK(make_space(5).dim() == 36);
    CHECK(make_space(8).dim() == 81);
    CHECK_THROWS_AS(make_space(0), DomainError);
    auto s = make_space(4);
    std::vector<int> seen(s.dim(), 0);
    for (int n1 = 0; n1 <= 4; ++n1)
        for (int n2 = 0; n2 <= 4; ++n2) {
            int k = s.index(n1, n2);
            REQUIRE(k >= 0);
            REQUIRE(k < s.dim());
            ++seen[k];
            CHECK(s.occupations(k) == std::pair{n1, n2});
        }
    for (int c : seen) CHECK(c == 1);
}

TEST_CASE("ladder matrix elements") {
    auto s = make_space(4);
    auto a1 = annihilator(s, Mode::One);
    auto a2 = annihilator(s, Mode::Two);
    CHECK(std::abs(a1.m(s.index(0, 0), s.index(1, 0)) - 1.0) < 1e-15);
    CHECK(std::abs(a2.m(s.index(0, 1), s.index(0, 2)) - std::sqrt(2.0)) < 1e-15);
    CHECK((creator(s, Mode::One).m - a1.m.adjoint()).norm() == 0.0);
}

TEST_CASE("canonical commutators away from the cutoff") {
    auto s = make_space(5);
    const Mode modes[] = {Mode::One, Mode::Two};
    for (Mode m : modes)
        for (Mode l : modes) {
            auto c = commutator(annihilator(s, m), creator(s, l));
            for (int i = 0; i < s.dim(); ++i) {
                auto [n1, n2] = s.occupations(i);
                if (n1 >= 5 || n2 >= 5) continue;
                for (int j = 0; j < s.dim(); ++j) {
                    cplx expect = (i == j && m == l) ? 1.0 : 0.0;
                    CHECK(std::abs(c.m(j, i) - expect) < 1e-14);
                }
            }
        }
}

TEST_CASE("su(2) generators") {
    auto s = make_space(5);
    auto jp = su2_generator(s, Su2::JPlus);
    auto jm = su2_generator(s, Su2::JMinus);
    auto j3 = su2_generator(s, Su2::J3);
    auto n = su2_generator(s, Su2::N);
    CHECK(std::abs(jp.m(s.index(1, 0), s.index(0, 1)) - 1.0) < 1e-15);
    CHECK(std::abs(expectation(j3, basis_state(s, 1, 0)) - 0.5) < 1e-15);

    // The generators preserve n1 + n2, so these hold wherever n1 + n2 < n_max.
    const int lim = 4;
    CHECK(low_dev(commutator(jp, jm), cplx(2.0) * j3, lim) < 1e-13);
    CHECK(low_dev(commutator(j3, jp), jp, lim) < 1e-13);
    CHECK(low_dev(commutator(j3, jm), cplx(-1.0) * jm, lim) < 1e-13);
    auto zero = cplx(0.0) * jp;
    for (const auto& g : {jp, jm, j3}) CHECK(low_dev(commutator(n, g), zero, lim) < 1e-13);
}

TEST_CASE("apply and expectation") {
    auto s = make_space(3);
    auto psi = coherent_state(s, 0.2, 0.1 * I);
    auto id = apply(identity(s), psi);
    CHECK((id.amp - psi.amp).norm() == 0.0);
    auto n = su2_generator(s, Su2::N);
    CHECK(std::abs(expectation(n, vacuum(s))) == 0.0);
    CHECK(std::abs(expectation(n, basis_state(s, 1, 1)) - 1.0) < 1e-15);
    CHECK_THROWS_AS(inner(vacuum(s), vacuum(make_space(4))), DimensionMismatch);
}

TEST_CASE("displacement operator") {
    auto s8 = make_space(8);
    CHECK((displacement_operator(s8, 0.0, 0.0).m - identity(s8).m).norm() == 0.0);
    auto d = displacement_operator(make_space(12), 1.0, 0.0);
    CHECK(std::abs(d.m(0, 0) - std::exp(-0.5)) < 1e-6);

    auto s10 = make_space(10);
    for (auto [c1, c2] : {std::pair<cplx, cplx>{1.0, 0.0}, {0.6 * I, cplx(0.3, -0.4)}, {0.5, 0.5}}) {
        auto dd = displacement_operator(s10, c1, c2);
        auto coh = coherent_state(s10, c1, c2);
        auto dv = apply(dd, vacuum(s10));
        // Compare on n1, n2 < 8 where the exponential is unaffected by the cutoff.
        double dev = 0.0;
        for (int k = 0; k < s10.dim(); ++k) {
            auto [n1, n2] = s10.occupations(k);
            if (n1 < 6 && n2 < 6) dev = std::max(dev, std::abs(dv.amp[k] - coh.amp[k]));
        }
        CHECK(dev < 1e-8);
        CHECK(low_dev(dd.adjoint() * dd, identity(s10), 6) < 1e-8);
    }
    CHECK_THROWS_AS(displacement_operator(make_space(3), 2.0, 0.0), TruncationError);
    CHECK_THROWS_AS(displacement_operator(make_space(3), 0.0, 10.0), TruncationError);
    CHECK(displacement_tail_mass(3, 10.0) == doctest::Approx(1.0));
    // Single-term check: P(N > 0) = 1 - e^{-x}.
    CHECK(displacement_tail_mass(0, 0.5) == doctest::Approx(1 - std::exp(-0.25)));
}

TEST_CASE("mixing operator limits and unitarity") {
    auto s = make_space(6);
    CHECK(mixing_angle(1.0, 1) == 0.0);
    CHECK((mixing_operator(s, 1.0, 0.7, 1).m - identity(s).m).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(mixing_angle(-1.0, 1) == doctest::Approx(pi / 2));
    auto t = mixing_operator(s, 0.3, 1.1, -1);
    CHECK(low_dev(t.adjoint() * t, identity(s), 5) < 1e-10);
}

TEST_CASE("mixing operator transformation laws") {
    auto s = make_space(7);
    const cplx alpha = std::sqrt(0.7) * std::exp(I * 0.4);
    const cplx beta = std::sqrt(0.3) * std::exp(-I * 1.3);
    const double g3 = std::norm(alpha) - std::norm(beta);
    const double dth = std::arg(alpha) - std::arg(beta);
    auto a1 = annihilator(s, Mode::One);
    auto a2 = annihilator(s, Mode::Two);
    for (int eps : {1, -1}) {
        auto t = mixing_operator(s, g3, dth, eps);
        cplx p = std::sqrt((1 + eps * g3) / 2), q = std::sqrt((1 - eps * g3) / 2);
        auto law1 = p * a1 - cplx(eps) * std::exp(-I * dth) * q * a2;
        auto law2 = p * a2 + cplx(eps) * std::exp(I * dth) * q * a1;
        CHECK(low_dev(t.adjoint() * a1 * t, law1, 5) < 1e-8);
        CHECK(low_dev(t.adjoint() * a2 * t, law2, 5) < 1e-8);
        auto h = habeta(s, alpha, beta);
        auto target = number(s, eps == 1 ? Mode::One : Mode::Two);
        CHECK(low_dev(t.adjoint() * h * t, target, 5) < 1e-8);
    }
}
