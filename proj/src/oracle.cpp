#include "tmd/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "tmd/errors.hpp"

namespace tmd {

TwoModeOperator build_hamiltonian(const FockSpace& space, const CoeffSample& c) {
    const auto a1 = annihilator(space, Mode::One).m;
    const auto a2 = annihilator(space, Mode::Two).m;
    const Eigen::MatrixXcd c1 = a1.adjoint();
    const Eigen::MatrixXcd c2 = a2.adjoint();
    Eigen::MatrixXcd h = c.w11 * (c1 * a1) + c.w22 * (c2 * a2) + c.w12 * (c1 * a2) +
                         c.w21() * (c2 * a1);
    h += c.F1 * c1 + std::conj(c.F1) * a1 + c.F2 * c2 + std::conj(c.F2) * a2;
    h.diagonal().array() += c.B;
    return {space, h};
}

namespace {

// exp(-i H dt) for Hermitian H through its eigenbasis.
Eigen::MatrixXcd hermitian_step(const Eigen::MatrixXcd& h, double dt) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::VectorXcd ph = (-I * dt * es.eigenvalues().cast<cplx>()).array().exp();
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

TwoModeOperator brute_force_propagator(const FockSpace& space, const Scenario& sc, double t,
                                       int n_steps, double truncation_threshold) {
    if (n_steps < 1) throw DomainError("n_steps must be >= 1");
    if (t < 0.0 || t > sc.t_max()) throw DomainError("t outside the scenario domain");
    const double dt = t / n_steps;
    if (sc.has_drive()) {
        // |c(t)| <= int |F| since S is unitary.
        double bound = 0.0;
        for (int k = 0; k < n_steps; ++k) {
            auto c = eval_coeffs(sc, (k + 0.5) * dt);
            bound += (std::abs(c.F1) + std::abs(c.F2)) * dt;
        }
        if (displacement_tail_mass(space.n_max(), bound) > truncation_threshold)
            throw TruncationError("drive pushes amplitude toward the cutoff");
    }
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(space.dim(), space.dim());
    if (t == 0.0) return {space, u};
    for (int k = 0; k < n_steps; ++k) {
        auto h = build_hamiltonian(space, eval_coeffs(sc, (k + 0.5) * dt));
        u = hermitian_step(h.m, dt) * u;
    }
    return {space, u};
}

SMatrix2 brute_force_smatrix(const Scenario& sc, double t, int n_steps) {
    if (n_steps < 1) throw DomainError("n_steps must be >= 1");
    if (t < 0.0 || t > sc.t_max()) throw DomainError("t outside the scenario domain");
    SMatrix2 s;
    s.t = t;
    s.m = Eigen::Matrix2cd::Identity();
    if (t == 0.0) return s;
    const double dt = t / n_steps;
    for (int k = 0; k < n_steps; ++k) {
        auto c = eval_coeffs(sc, (k + 0.5) * dt);
        const double mean = 0.5 * (c.w11 + c.w22);
        const double d = 0.5 * (c.w11 - c.w22);
        Eigen::Matrix2cd w0;
        w0 << d, c.w12, c.w21(), -d;
        const double om = std::sqrt(d * d + std::norm(c.w12));
        const double sinc = om > 0.0 ? std::sin(om * dt) / om : dt;
        Eigen::Matrix2cd step = std::cos(om * dt) * Eigen::Matrix2cd::Identity() - I * sinc * w0;
        s.m = std::exp(-I * mean * dt) * step * s.m;
    }
    return s;
}

namespace {

double uniform_step(std::span<const double> times, std::size_t n_values) {
    if (times.size() != n_values) throw DimensionMismatch("times and values differ in length");
    if (times.size() < 3) throw InsufficientSamples("need at least 3 samples");
    const double h = times[1] - times[0];
    if (!(h > 0.0)) throw DomainError("times must increase");
    for (std::size_t k = 2; k < times.size(); ++k)
        if (std::abs(times[k] - times[k - 1] - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw DomainError("samples must be uniformly spaced");
    return h;
}

}  // namespace

double ode_residual(std::span<const double> times, std::span<const cplx> values,
                    const ScalarRhs& rhs) {
    const double h = uniform_step(times, values.size());
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < values.size(); ++k) {
        cplx d = (values[k + 1] - values[k - 1]) / (2.0 * h);
        worst = std::max(worst, std::abs(d - rhs(times[k], values[k])));
    }
    return worst;
}

double ode_residual_second(std::span<const double> times, std::span<const cplx> values,
                           const SecondOrderRhs& rhs) {
    const double h = uniform_step(times, values.size());
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < values.size(); ++k) {
        cplx d1 = (values[k + 1] - values[k - 1]) / (2.0 * h);
        cplx d2 = (values[k + 1] - 2.0 * values[k] + values[k - 1]) / (h * h);
        worst = std::max(worst, std::abs(d2 - rhs(times[k], values[k], d1)));
    }
    return worst;
}

double ComparisonReport::min_fidelity() const {
    double m = 1.0;
    for (double f : fidelities) m = std::min(m, f);
    return m;
}

double fidelity(const FockState& a, const FockState& b) {
    double na = a.amp.squaredNorm(), nb = b.amp.squaredNorm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::norm(inner(a, b)) / (na * nb);
}

namespace {

cplx log_det(const Eigen::MatrixXcd& m) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
    const Eigen::MatrixXcd& f = lu.matrixLU();
    cplx s = std::log(cplx(lu.permutationP().determinant()));
    for (Eigen::Index i = 0; i < f.rows(); ++i) s += std::log(f(i, i));
    return s;
}

}  // namespace

ComparisonReport compare_operators(const TwoModeOperator& a, const TwoModeOperator& b,
                                   std::span<const FockState> test_states, int margin) {
    if (!(a.space == b.space)) throw DimensionMismatch("operators live on different spaces");
    ComparisonReport r;
    const auto& sp = a.space;
    for (int i = 0; i < sp.dim(); ++i) {
        if (!sp.interior(i, margin)) continue;
        for (int j = 0; j < sp.dim(); ++j)
            if (sp.interior(j, margin))
                r.max_entry_deviation =
                    std::max(r.max_entry_deviation, std::abs(a.m(i, j) - b.m(i, j)));
    }
    for (const auto& psi : test_states) {
        if (!(psi.space == sp)) throw DimensionMismatch("test state on a different space");
        r.fidelities.push_back(fidelity(apply(a, psi), apply(b, psi)));
    }
    cplx ld = log_det(a.m) - log_det(b.m);
    r.determinant_ratio = std::exp(ld);
    r.determinant_deviation = std::abs(r.determinant_ratio - 1.0);
    if (!std::isfinite(r.determinant_deviation)) {
        r.notes.push_back("determinant ratio not finite");
        r.determinant_deviation = std::numeric_limits<double>::max();
        r.determinant_ratio = 0.0;
    }
    return r;
}

double unitarity_defect(const TwoModeOperator& u) {
    Eigen::MatrixXcd d = u.m.adjoint() * u.m;
    d.diagonal().array() -= 1.0;
    return d.cwiseAbs().maxCoeff();
}

ConvergenceReport self_convergence(const FockSpace& space, const Scenario& sc, double t, int n) {
    ConvergenceReport r;
    r.steps = {n, 2 * n, 4 * n};
    auto u1 = brute_force_propagator(space, sc, t, n);
    auto u2 = brute_force_propagator(space, sc, t, 2 * n);
    auto u4 = brute_force_propagator(space, sc, t, 4 * n);
    r.coarse_deviation = compare_operators(u1, u2, {}).max_entry_deviation;
    r.fine_deviation = compare_operators(u2, u4, {}).max_entry_deviation;
    r.ratio = r.fine_deviation > 0.0 ? r.coarse_deviation / r.fine_deviation
                                     : std::numeric_limits<double>::infinity();
    return r;
}

}  // namespace tmd
