#include "tmd/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "tmd/errors.hpp"

namespace tmd {

std::vector<CoherentAmplitudes> c_coefficients(const Scenario& sc, std::array<cplx, 2> c_tilde0,
                                               std::span<const double> grid, double tol) {
    if (grid.empty()) return {};
    if (grid.front() != 0.0) throw DomainError("coefficient grid must start at t = 0");
    const Eigen::Vector2cd c0(c_tilde0[0], c_tilde0[1]);

    // y = (S [column major], I1, I2, chi) with I = int S^dag F.
    auto amplitudes = [&c0](const OdeState& y) -> Eigen::Vector2cd {
        Eigen::Map<const Eigen::Matrix2cd> s(y.data());
        Eigen::Vector2cd in(y[4], y[5]);
        return s * (c0 - I * in);
    };
    OdeRhs rhs = [&](double t, const OdeState& y, OdeState& dy) {
        auto c = eval_coeffs(sc, std::min(t, sc.t_max()));
        Eigen::Matrix2cd w = generator_matrix(c);
        Eigen::Map<const Eigen::Matrix2cd> s(y.data());
        Eigen::Vector2cd f(c.F1, c.F2);
        Eigen::Vector2cd amp = amplitudes(y);
        dy.resize(7);
        Eigen::Map<Eigen::Matrix2cd> ds(dy.data());
        ds = -I * w * s;
        Eigen::Vector2cd di = s.adjoint() * f;
        dy[4] = di[0];
        dy[5] = di[1];
        dy[6] = c.B + (f[0] * std::conj(amp[0])).real() + (f[1] * std::conj(amp[1])).real();
    };
    OdeOptions opts;
    opts.rtol = 0.1 * tol;
    opts.atol = 0.1 * tol;
    OdeState y0 = OdeState::Zero(7);
    y0[0] = 1.0;
    y0[3] = 1.0;
    auto res = integrate_dopri5(rhs, y0, grid, opts);

    std::vector<CoherentAmplitudes> out;
    for (std::size_t k = 0; k < res.samples.size(); ++k) {
        const auto& y = res.samples[k];
        Eigen::Vector2cd amp = amplitudes(y);
        CoherentAmplitudes a;
        a.t = grid[k];
        a.c1 = amp[0];
        a.c2 = amp[1];
        a.chi = y[6].real();
        a.global_phase = std::exp(-I * a.chi);
        out.push_back(a);
    }
    return out;
}

CoherentAmplitudes c_coefficients(const Scenario& sc, std::array<cplx, 2> c_tilde0, double t,
                                  double tol) {
    std::array<double, 2> g{0.0, t};
    return c_coefficients(sc, c_tilde0, g, tol).back();
}

namespace {

Eigen::VectorXcd diag_phase(const FockSpace& s, cplx coef_n, cplx coef_m) {
    // exp(coef_n * (n1+n2)/2 + coef_m * (n1-n2)/2)
    Eigen::VectorXcd d(s.dim());
    for (int k = 0; k < s.dim(); ++k) {
        auto [n1, n2] = s.occupations(k);
        d[k] = std::exp(coef_n * (0.5 * (n1 + n2)) + coef_m * (0.5 * (n1 - n2)));
    }
    return d;
}

}  // namespace

TwoModeOperator u0_from_factors(const FockSpace& space, const FactorSample& f,
                                Ordering ordering) {
    if (!f.chart_valid) throw ChartSingularity("factors invalid at t", f.t);
    const Eigen::MatrixXcd jp = su2_generator(space, Su2::JPlus).m;
    const Eigen::MatrixXcd jm = su2_generator(space, Su2::JMinus).m;
    Eigen::MatrixXcd ep = (f.Lambda * jp).exp();
    Eigen::MatrixXcd em = (f.Gamma * jm).exp();
    Eigen::VectorXcd mid = diag_phase(space, 0.0, f.Omega);
    Eigen::VectorXcd left =
        diag_phase(space, -I * f.alpha, ordering == Ordering::Standard ? -I * f.rho : cplx(0.0));
    Eigen::MatrixXcd u = left.asDiagonal() * ep * mid.asDiagonal() * em;
    return {space, u};
}

TwoModeOperator u0_from_smatrix(const FockSpace& space, const SMatrix2& s, double alpha) {
    Eigen::Matrix2cd v = std::exp(0.5 * I * alpha) * s.m;
    cplx a = v(0, 0), b = v(0, 1);
    double theta = 2.0 * std::atan2(std::abs(b), std::abs(a));
    double arg_a = std::abs(a) > 1e-15 ? std::arg(a) : 0.0;
    double arg_mb = std::abs(b) > 1e-15 ? std::arg(-b) : 0.0;
    double phi = -(arg_a + arg_mb);
    double psi = -(arg_a - arg_mb);
    const Eigen::MatrixXcd jp = su2_generator(space, Su2::JPlus).m;
    const Eigen::MatrixXcd jm = su2_generator(space, Su2::JMinus).m;
    Eigen::MatrixXcd ry = (cplx(-0.5 * theta) * (jp - jm)).exp();
    Eigen::VectorXcd left = diag_phase(space, -I * alpha, -I * phi);
    Eigen::VectorXcd right = diag_phase(space, 0.0, -I * psi);
    Eigen::MatrixXcd u = left.asDiagonal() * ry * right.asDiagonal();
    return {space, u};
}

TwoModeOperator u0_from_smatrix(const FockSpace& space, const SMatrix2& s) {
    // alpha only matters modulo 4 pi through e^{i alpha/2}; recover it from det S.
    return u0_from_smatrix(space, s, -std::arg(s.det()));
}

namespace {

// Factors in the case's natural ordering at time t.
FactorSample factors_at(const Scenario& sc, double t, double tol, Ordering& ordering) {
    auto ar = alpha_rho(sc, t);
    FactorSample f{t, ar.alpha, ar.rho, {}, {}, {}, true};
    auto ord = closed_ordering(sc);
    if (!ord) {
        std::array<double, 2> g{0.0, t};
        auto num = solve_riccati_numeric(sc, g, 0.1 * tol);
        ordering = Ordering::Standard;
        if (!num.samples.back().chart_valid)
            throw ChartSingularity("Riccati chart broke", num.singular_time.value_or(t));
        return num.samples.back();
    }
    ordering = *ord;
    FactorTriple tr;
    if (sc.kind() == CaseKind::QuadraticPhase) tr = alt_factors_quadratic_phase(sc, t);
    else if (sc.kind() == CaseKind::FresnelNorm) tr = alt_factors_fresnel(sc, t);
    else tr = closed_factors(sc, t, true);
    f.Lambda = tr.Lambda;
    f.Omega = tr.Omega;
    f.Gamma = tr.Gamma;
    return f;
}

// Beyond this the Gauss factors lose too many digits to cancellation.
constexpr double kFactorConditioning = 1e4;

}  // namespace

TwoModeOperator assemble_U(const FockSpace& space, const Scenario& sc, double t, double tol,
                           U0Route route, double truncation_threshold) {
    if (t == 0.0) return identity(space);
    auto amp = c_coefficients(sc, {0.0, 0.0}, t, tol);
    TwoModeOperator d = displacement_operator(space, amp.c1, amp.c2, truncation_threshold);

    TwoModeOperator u0{space, {}};
    bool done = false;
    if (route != U0Route::Euler) {
        try {
            Ordering ord;
            FactorSample f = factors_at(sc, t, tol, ord);
            bool ill = std::abs(f.Lambda) > kFactorConditioning ||
                       std::abs(f.Gamma) > kFactorConditioning;
            if (route == U0Route::Factors || !ill) {
                u0 = u0_from_factors(space, f, ord);
                done = true;
            }
        } catch (const ChartSingularity&) {
            if (route == U0Route::Factors) throw;
        }
    }
    if (!done) u0 = u0_from_smatrix(space, smatrix_numeric(sc, t, tol), alpha_rho(sc, t).alpha);
    return d * (amp.global_phase * u0);
}

CoherentStateSpec CoherentStateSpec::from_angles(cplx z0, double rho0, double theta_alpha0,
                                                 double theta_beta0) {
    return {z0, std::cos(rho0) * std::exp(I * theta_alpha0),
            std::sin(rho0) * std::exp(I * theta_beta0)};
}

std::array<cplx, 2> CoherentStateSpec::c_initial() const {
    return {Z0 * std::conj(alpha0), Z0 * std::conj(beta0)};
}

CoherentStateSpec coherent_spec(const Scenario& sc) {
    cplx z0 = sc.z0().value_or(1.0);
    switch (sc.kind()) {
        case CaseKind::IsotropicConstant: {
            const auto& p = sc.as<IsotropicParams>();
            return CoherentStateSpec::from_angles(z0, p.rho0, p.theta_alpha0, p.theta_beta0);
        }
        case CaseKind::RhoConstant:
        case CaseKind::LogRho: {
            auto m = mixing_state(sc, 0.0);
            return CoherentStateSpec::from_angles(z0, m.rho_m, m.theta_alpha, m.theta_beta);
        }
        default:
            throw ConditionViolated("coherent spec needs an isotropic scenario");
    }
}

namespace {

void require_matching_spec(const Scenario& sc, const CoherentStateSpec& spec) {
    auto ref = coherent_spec(sc);
    if (std::abs(ref.alpha0 - spec.alpha0) > 1e-12 || std::abs(ref.beta0 - spec.beta0) > 1e-12)
        throw ConditionViolated("coherent spec (alpha0, beta0) does not match the scenario");
}

CoherentAmplitudes time_dependent_block(const Scenario& sc, const CoherentStateSpec& spec,
                                        double t, double Phi, double Theta) {
    auto view = linear_phase_view(sc);
    const double eta0 = view->eta0, w0 = view->w0;
    const double delta = std::sqrt(4 * eta0 * eta0 + w0 * w0);
    const auto m0 = mixing_state(sc, 0.0);
    const double r0 = m0.rho_m;
    const cplx ph = std::exp(-I * t / 2.0);
    CoherentAmplitudes a;
    a.t = t;
    a.c1 = ph * std::exp(I * Theta / 2.0) * spec.Z0 * std::cos(r0) * std::exp(-I * m0.theta_alpha) *
           (std::cos(Phi) - I * (w0 / delta) * (1.0 + 2 * eta0 / w0 * std::tan(r0)) * std::sin(Phi));
    a.c2 = ph * std::exp(-I * Theta / 2.0) * spec.Z0 * std::sin(r0) * std::exp(-I * m0.theta_beta) *
           (std::cos(Phi) + I * (w0 / delta) * (1.0 - 2 * eta0 / w0 / std::tan(r0)) * std::sin(Phi));
    return a;
}

}  // namespace

CoherentAmplitudes coherent_evolution_closed(CoherentCase which, const Scenario& sc,
                                             const CoherentStateSpec& spec, double t) {
    switch (which) {
        case CoherentCase::Isotropic: {
            if (sc.kind() != CaseKind::IsotropicConstant)
                throw ConditionViolated("isotropic law needs an IsotropicConstant scenario");
            require_matching_spec(sc, spec);
            CoherentAmplitudes a;
            a.t = t;
            cplx e = std::exp(-I * t);
            a.c1 = spec.Z0 * std::conj(spec.alpha0) * e;
            a.c2 = spec.Z0 * std::conj(spec.beta0) * e;
            return a;
        }
        case CoherentCase::TimeDependent: {
            if (!is_time_dependent_isotropic(sc))
                throw ConditionViolated("time-dependent law needs RhoConstant or LogRho");
            require_matching_spec(sc, spec);
            auto m = mixing_state(sc, t);
            return time_dependent_block(sc, spec, t, m.Phi_tilde, m.Theta_tilde);
        }
        case CoherentCase::RhoConstant: {
            if (sc.kind() != CaseKind::RhoConstant)
                throw ConditionViolated("RhoConstant law needs a RhoConstant scenario");
            require_matching_spec(sc, spec);
            const auto& p = sc.as<RhoConstantParams>();
            const double delta = std::sqrt(4 * p.eta0 * p.eta0 + p.w0 * p.w0);
            const double s2 = std::sin(2 * p.rho0), c2 = std::cos(2 * p.rho0);
            return time_dependent_block(sc, spec, t, delta / (4 * p.eta0) * s2 * t,
                                        (p.w0 / (2 * p.eta0) * s2 - c2) * t);
        }
        case CoherentCase::LogRho: {
            if (sc.kind() != CaseKind::LogRho)
                throw ConditionViolated("LogRho law needs a LogRho scenario");
            require_matching_spec(sc, spec);
            const auto& p = sc.as<LogRhoParams>();
            const double delta = std::sqrt(4 * p.eta0 * p.eta0 + p.w0 * p.w0);
            const double x = t + p.t0;
            const double L = std::log((1 + x * x) / (1 + p.t0 * p.t0));
            const double Phi = delta / (4 * p.eta0) * L;
            const double Theta =
                p.w0 / (2 * p.eta0) * L + t + 2 * std::atan(p.t0) - 2 * std::atan(x);
            return time_dependent_block(sc, spec, t, Phi, Theta);
        }
    }
    throw DomainError("unknown coherent case");
}

EigenCheck eigen_check(const TwoModeOperator& op, const FockState& psi, int margin) {
    if (!(op.space == psi.space)) throw DimensionMismatch("operator and state spaces differ");
    double n = psi.norm();
    if (n == 0.0) throw DomainError("zero state");
    Eigen::VectorXcd v = psi.amp / n;
    Eigen::VectorXd mask = interior_mask(psi.space, margin);
    Eigen::VectorXcd pv = mask.cast<cplx>().cwiseProduct(v);
    Eigen::VectorXcd pav = mask.cast<cplx>().cwiseProduct(op.m * v);
    double pn = pv.squaredNorm();
    if (pn == 0.0) throw DomainError("state has no interior support");
    EigenCheck r;
    r.eigenvalue = pv.dot(pav) / pn;
    r.residual = (pav - r.eigenvalue * pv).norm();
    return r;
}

TwoModeOperator ladder_operator(const FockSpace& space, Ladder which, const Scenario& sc,
                                const CoherentStateSpec& spec, const CoherentAmplitudes& amp) {
    cplx ka{}, kb{};
    switch (which) {
        case Ladder::GeneralizedLowering:
            if (spec.Z0 == 0.0) {
                ka = spec.alpha0;
                kb = spec.beta0;
            } else {
                ka = std::conj(amp.c1) / std::conj(spec.Z0);
                kb = std::conj(amp.c2) / std::conj(spec.Z0);
            }
            break;
        case Ladder::Initial:
            ka = spec.alpha0;
            kb = spec.beta0;
            break;
        case Ladder::Instantaneous: {
            if (sc.kind() == CaseKind::IsotropicConstant) {
                auto s0 = coherent_spec(sc);
                ka = s0.alpha0;
                kb = s0.beta0;
            } else {
                auto m = mixing_state(sc, amp.t);
                ka = std::cos(m.rho_m) * std::exp(I * m.theta_alpha);
                kb = std::sin(m.rho_m) * std::exp(I * m.theta_beta);
            }
            break;
        }
    }
    return ka * annihilator(space, Mode::One) + kb * annihilator(space, Mode::Two);
}

EigenCheck ladder_eigenvalue_check(const FockState& psi, const CoherentStateSpec& spec,
                                   const CoherentAmplitudes& amp, const Scenario& sc,
                                   Ladder which) {
    return eigen_check(ladder_operator(psi.space, which, sc, spec, amp), psi);
}

EigenCheck ladder_eigenvalue_check(const FockSpace& space, const CoherentStateSpec& spec,
                                   const CoherentAmplitudes& amp, const Scenario& sc,
                                   Ladder which, double truncation_threshold) {
    for (cplx c : {amp.c1, amp.c2})
        if (displacement_tail_mass(space.n_max(), c) > truncation_threshold)
            throw TruncationError("coherent amplitude too large for n_max=" +
                                  std::to_string(space.n_max()));
    return ladder_eigenvalue_check(coherent_state(space, amp.c1, amp.c2), spec, amp, sc, which);
}

TwoModeOperator habeta(const FockSpace& space, cplx alpha, cplx beta) {
    TwoModeOperator a = alpha * annihilator(space, Mode::One) + beta * annihilator(space, Mode::Two);
    return a.adjoint() * a;
}

SpectrumReport habeta_spectrum_check(const FockSpace& space, const CoherentStateSpec& spec,
                                     int k) {
    const int top = space.n_max() - 2;
    if (top < 0) throw DomainError("n_max too small for a spectrum check");
    if (k < 1 || k > top + 1) throw DomainError("k must lie in [1, n_max - 1]");
    TwoModeOperator h = habeta(space, spec.alpha0, spec.beta0);
    std::vector<int> idx;
    for (int i = 0; i < space.dim(); ++i)
        if (space.interior(i, 2)) idx.push_back(i);
    Eigen::MatrixXcd sub(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t c = 0; c < idx.size(); ++c) sub(r, c) = h.m(idx[r], idx[c]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sub, Eigen::EigenvaluesOnly);
    Eigen::VectorXd ev = es.eigenvalues();

    SpectrumReport rep;
    std::vector<std::vector<double>> clusters;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (clusters.empty() || ev[i] - clusters.back().back() > 1e-6) clusters.push_back({});
        clusters.back().push_back(ev[i]);
    }
    rep.multiplicities_ok = clusters.size() >= static_cast<std::size_t>(k);
    for (int n = 0; n < k && n < static_cast<int>(clusters.size()); ++n) {
        double mean = 0.0;
        for (double v : clusters[n]) {
            rep.max_deviation = std::max(rep.max_deviation, std::abs(v - n));
            mean += v;
        }
        rep.levels.push_back(mean / clusters[n].size());
        rep.multiplicities.push_back(static_cast<int>(clusters[n].size()));
        rep.expected_multiplicities.push_back(top - n + 1);
        if (rep.multiplicities.back() != rep.expected_multiplicities.back())
            rep.multiplicities_ok = false;
    }
    if (clusters.size() < static_cast<std::size_t>(k))
        rep.max_deviation = std::numeric_limits<double>::infinity();
    return rep;
}

}  // namespace tmd
