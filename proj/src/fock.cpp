#include "tmd/fock.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "tmd/errors.hpp"

namespace tmd {

FockSpace::FockSpace(int n_max) : n_max_(n_max) {
    if (n_max < 1) throw DomainError("n_max must be at least 1");
}

int FockSpace::index(int n1, int n2) const {
    if (n1 < 0 || n2 < 0 || n1 > n_max_ || n2 > n_max_)
        throw DomainError("occupation outside the truncated space");
    return n1 * (n_max_ + 1) + n2;
}

std::pair<int, int> FockSpace::occupations(int idx) const {
    if (idx < 0 || idx >= dim()) throw DomainError("flat index out of range");
    return {idx / (n_max_ + 1), idx % (n_max_ + 1)};
}

bool FockSpace::interior(int idx, int margin) const {
    auto [n1, n2] = occupations(idx);
    return n1 + n2 <= n_max_ - margin;
}

FockSpace make_space(int n_max) { return FockSpace(n_max); }

namespace {

void require_same(const FockSpace& a, const FockSpace& b) {
    if (!(a == b)) throw DimensionMismatch("operands live on different Fock spaces");
}

}  // namespace

TwoModeOperator operator*(const TwoModeOperator& a, const TwoModeOperator& b) {
    require_same(a.space, b.space);
    return {a.space, a.m * b.m};
}

TwoModeOperator operator+(const TwoModeOperator& a, const TwoModeOperator& b) {
    require_same(a.space, b.space);
    return {a.space, a.m + b.m};
}

TwoModeOperator operator-(const TwoModeOperator& a, const TwoModeOperator& b) {
    require_same(a.space, b.space);
    return {a.space, a.m - b.m};
}

TwoModeOperator operator*(cplx s, const TwoModeOperator& a) { return {a.space, s * a.m}; }

TwoModeOperator commutator(const TwoModeOperator& a, const TwoModeOperator& b) {
    return a * b - b * a;
}

TwoModeOperator identity(const FockSpace& s) {
    return {s, Eigen::MatrixXcd::Identity(s.dim(), s.dim())};
}

TwoModeOperator annihilator(const FockSpace& s, Mode mode) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(s.dim(), s.dim());
    for (int n1 = 0; n1 <= s.n_max(); ++n1) {
        for (int n2 = 0; n2 <= s.n_max(); ++n2) {
            int n = mode == Mode::One ? n1 : n2;
            if (n == 0) continue;
            int to = mode == Mode::One ? s.index(n1 - 1, n2) : s.index(n1, n2 - 1);
            m(to, s.index(n1, n2)) = std::sqrt(static_cast<double>(n));
        }
    }
    return {s, m};
}

TwoModeOperator creator(const FockSpace& s, Mode mode) { return annihilator(s, mode).adjoint(); }

TwoModeOperator number(const FockSpace& s, Mode mode) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(s.dim(), s.dim());
    for (int k = 0; k < s.dim(); ++k) {
        auto [n1, n2] = s.occupations(k);
        m(k, k) = mode == Mode::One ? n1 : n2;
    }
    return {s, m};
}

TwoModeOperator su2_generator(const FockSpace& s, Su2 which) {
    switch (which) {
        case Su2::JPlus:
            return creator(s, Mode::One) * annihilator(s, Mode::Two);
        case Su2::JMinus:
            return annihilator(s, Mode::One) * creator(s, Mode::Two);
        case Su2::J3:
            return cplx(0.5) * (number(s, Mode::One) - number(s, Mode::Two));
        case Su2::N:
            return cplx(0.5) * (number(s, Mode::One) + number(s, Mode::Two));
    }
    throw DomainError("unknown su(2) generator");
}

TwoModeOperator expm(const TwoModeOperator& a) { return {a.space, a.m.exp()}; }

double displacement_tail_mass(int n_max, cplx c) {
    double x = std::norm(c);
    if (x == 0.0) return 0.0;
    // P(N > n_max) for N ~ Poisson(x).
    return boost::math::gamma_p(n_max + 1.0, x);
}

TwoModeOperator displacement_operator(const FockSpace& s, cplx c1, cplx c2, double threshold) {
    for (cplx c : {c1, c2}) {
        double tail = displacement_tail_mass(s.n_max(), c);
        if (tail > threshold)
            throw TruncationError("displacement |c|=" + std::to_string(std::abs(c)) +
                                  " leaves tail mass " + std::to_string(tail) +
                                  " beyond n_max=" + std::to_string(s.n_max()));
    }
    TwoModeOperator gen = c1 * creator(s, Mode::One) - std::conj(c1) * annihilator(s, Mode::One) +
                          c2 * creator(s, Mode::Two) - std::conj(c2) * annihilator(s, Mode::Two);
    return expm(gen);
}

double mixing_angle(double gamma3, int eps) {
    if (eps != 1 && eps != -1) throw DomainError("eps must be +1 or -1");
    if (gamma3 < -1.0 || gamma3 > 1.0) throw DomainError("gamma3 outside [-1, 1]");
    // atan2 keeps the endpoints gamma3 = +-1 finite: 0 or +-pi/2.
    return std::atan2(eps * std::sqrt(1.0 - eps * gamma3), std::sqrt(1.0 + eps * gamma3));
}

TwoModeOperator mixing_operator(const FockSpace& s, double gamma3, double theta_diff, int eps) {
    double th = mixing_angle(gamma3, eps);
    cplx ph = std::exp(-I * theta_diff);
    TwoModeOperator gen = ph * su2_generator(s, Su2::JPlus) -
                          std::conj(ph) * su2_generator(s, Su2::JMinus);
    return expm(cplx(-th) * gen);
}

FockState basis_state(const FockSpace& s, int n1, int n2) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(s.dim());
    v[s.index(n1, n2)] = 1.0;
    return {s, v};
}

FockState vacuum(const FockSpace& s) { return basis_state(s, 0, 0); }

namespace {

cplx ipow(cplx z, int n) {
    cplx r = 1.0;
    for (int k = 0; k < n; ++k) r *= z;
    return r;
}

}  // namespace

FockState coherent_state(const FockSpace& s, cplx c1, cplx c2) {
    Eigen::VectorXcd v(s.dim());
    double pre = std::exp(-0.5 * (std::norm(c1) + std::norm(c2)));
    for (int k = 0; k < s.dim(); ++k) {
        auto [n1, n2] = s.occupations(k);
        double fact = std::exp(-0.5 * (std::lgamma(n1 + 1.0) + std::lgamma(n2 + 1.0)));
        v[k] = pre * fact * ipow(c1, n1) * ipow(c2, n2);
    }
    return {s, v};
}

FockState apply(const TwoModeOperator& op, const FockState& psi) {
    require_same(op.space, psi.space);
    return {psi.space, op.m * psi.amp};
}

cplx expectation(const TwoModeOperator& op, const FockState& psi) {
    require_same(op.space, psi.space);
    return psi.amp.dot(op.m * psi.amp);
}

cplx inner(const FockState& a, const FockState& b) {
    require_same(a.space, b.space);
    return a.amp.dot(b.amp);
}

Eigen::VectorXd interior_mask(const FockSpace& s, int margin) {
    Eigen::VectorXd v(s.dim());
    for (int k = 0; k < s.dim(); ++k) v[k] = s.interior(k, margin) ? 1.0 : 0.0;
    return v;
}

}  // namespace tmd
