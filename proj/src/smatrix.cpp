#include "tmd/smatrix.hpp"

#include <cmath>
#include <numbers>

#include "tmd/errors.hpp"

namespace tmd {

namespace {

constexpr double pi = std::numbers::pi;

}  // namespace

double SMatrix2::unitarity_defect() const {
    return max_abs(m.adjoint() * m - Eigen::Matrix2cd::Identity());
}

Eigen::Matrix2cd generator_matrix(const CoeffSample& c) {
    Eigen::Matrix2cd w;
    w << c.w11, c.w12, c.w21(), c.w22;
    return w;
}

Eigen::Matrix2cd polar_unitary(const Eigen::Matrix2cd& m) {
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

namespace {

std::vector<SMatrix2> integrate_s(const Scenario& sc, std::span<const double> times, double tol) {
    OdeRhs rhs = [&sc](double t, const OdeState& y, OdeState& dy) {
        Eigen::Matrix2cd w = generator_matrix(eval_coeffs(sc, std::min(t, sc.t_max())));
        Eigen::Map<const Eigen::Matrix2cd> s(y.data());
        dy.resize(4);
        Eigen::Map<Eigen::Matrix2cd> ds(dy.data());
        ds = -I * w * s;
    };
    OdeOptions opts;
    opts.rtol = 0.1 * tol;
    opts.atol = 0.1 * tol;
    OdeState y0(4);
    Eigen::Map<Eigen::Matrix2cd>(y0.data()) = Eigen::Matrix2cd::Identity();
    auto res = integrate_dopri5(rhs, y0, times, opts);
    std::vector<SMatrix2> out;
    for (std::size_t k = 0; k < res.samples.size(); ++k) {
        SMatrix2 s;
        s.t = times[k];
        s.m = Eigen::Map<const Eigen::Matrix2cd>(res.samples[k].data());
        if (s.unitarity_defect() > 10.0 * tol) {
            s.m = polar_unitary(s.m);
            s.reunitarized = true;
        }
        out.push_back(s);
    }
    return out;
}

}  // namespace

SMatrix2 smatrix_numeric(const Scenario& sc, double t, double tol) {
    return smatrix_numeric_between(sc, 0.0, t, tol);
}

std::vector<SMatrix2> smatrix_numeric(const Scenario& sc, std::span<const double> grid,
                                      double tol) {
    if (grid.empty()) return {};
    if (grid.front() != 0.0) throw DomainError("S-matrix grid must start at t = 0");
    return integrate_s(sc, grid, tol);
}

SMatrix2 smatrix_numeric_between(const Scenario& sc, double t_from, double t_to, double tol) {
    if (t_to < t_from) throw DomainError("t_to must not precede t_from");
    std::array<double, 2> times{t_from, t_to};
    return integrate_s(sc, times, tol).back();
}

namespace {

SMatrix2 make(double t, cplx s11, cplx s12, cplx s21, cplx s22) {
    SMatrix2 s;
    s.t = t;
    s.m << s11, s12, s21, s22;
    return s;
}

// Elements for eta with constant phase phi0 and norm integral R.
SMatrix2 block_constant_phase(double t, double i11, double i22, double R, double phi0) {
    cplx e1 = std::exp(-I * i11), e2 = std::exp(-I * i22);
    return make(t, e1 * std::cos(R), e1 * std::exp(I * phi0) * std::sin(R),
                -e2 * std::exp(-I * phi0) * std::sin(R), e2 * std::cos(R));
}

SMatrix2 block_linear_phase(double t, double i11, double i22, double eta0, double w0,
                            double phi0) {
    double delta = std::sqrt(4 * eta0 * eta0 + w0 * w0);
    double x = delta * t / 2;
    cplx e1 = std::exp(-I * i11), e2 = std::exp(-I * i22);
    double k = w0 / delta;
    return make(t, e1 * std::exp(I * w0 * t / 2.0) * (std::cos(x) - I * k * std::sin(x)),
                2 * eta0 / delta * e1 * std::exp(I * (phi0 + w0 * t / 2)) * std::sin(x),
                -2 * eta0 / delta * e2 * std::exp(-I * (phi0 + w0 * t / 2)) * std::sin(x),
                e2 * std::exp(-I * w0 * t / 2.0) * (std::cos(x) + I * k * std::sin(x)));
}

SMatrix2 block_general_phase(double t, double i11, double i22, double eta0, double w0,
                             double eps, double phi_t, double phi_0) {
    double delta = std::sqrt(4 * eta0 * eta0 + w0 * w0);
    double tilde = phi_t - phi_0;
    double x = delta * tilde / (2 * w0);
    double k = w0 / delta;
    cplx e1 = std::exp(-I * i11), e2 = std::exp(-I * i22);
    return make(t, e1 * std::exp(I * tilde / 2.0) * (std::cos(x) - I * k * std::sin(x)),
                2 * eps * eta0 / delta * e1 * std::exp(I * (phi_t + phi_0) / 2.0) * std::sin(x),
                -2 * eps * eta0 / delta * e2 * std::exp(-I * (phi_t + phi_0) / 2.0) *
                    std::sin(x),
                e2 * std::exp(-I * tilde / 2.0) * (std::cos(x) + I * k * std::sin(x)));
}

SMatrix2 block_all_constant(double t, double w11, double w22, cplx w12) {
    double d = w11 - w22;
    double b = std::sqrt(4 * std::norm(w12) + d * d);
    cplx ph = std::exp(-I * (w11 + w22) * t / 2.0);
    if (b == 0.0) return make(t, ph, 0.0, 0.0, ph);
    double c = std::cos(b * t / 2), s = std::sin(b * t / 2);
    return make(t, ph * (c - I * (d / b) * s), -2.0 * I * w12 / b * ph * s,
                -2.0 * I * std::conj(w12) / b * ph * s, ph * (c + I * (d / b) * s));
}

SMatrix2 block_isotropic(double t, cplx a, cplx b) {
    double g3 = std::norm(a) - std::norm(b);
    cplx ph = std::exp(-I * t / 2.0);
    double c = std::cos(t / 2), s = std::sin(t / 2);
    return make(t, ph * (c - I * g3 * s), -2.0 * I * std::conj(a) * b * ph * s,
                -2.0 * I * a * std::conj(b) * ph * s, ph * (c + I * g3 * s));
}

SMatrix2 block_time_dependent(double t, double eta0, double w0, double phi_0,
                              const MixingState& m) {
    double delta = std::sqrt(4 * eta0 * eta0 + w0 * w0);
    double k = w0 / delta;
    double P = m.Phi_tilde, Th = m.Theta_tilde;
    cplx ph = std::exp(-I * t / 2.0);
    return make(t, ph * std::exp(I * Th / 2.0) * (std::cos(P) - I * k * std::sin(P)),
                2 * eta0 / delta * ph * std::exp(I * phi_0) * std::exp(I * Th / 2.0) *
                    std::sin(P),
                -2 * eta0 / delta * ph * std::exp(-I * phi_0) * std::exp(-I * Th / 2.0) *
                    std::sin(P),
                ph * std::exp(-I * Th / 2.0) * (std::cos(P) + I * k * std::sin(P)));
}

}  // namespace

SMatrix2 smatrix_closed(const Scenario& sc, double t) {
    if (!(t >= 0.0) || t > sc.t_max()) throw DomainError("t outside the scenario domain");
    switch (sc.kind()) {
        case CaseKind::ConstantPhase: {
            const auto& p = sc.as<ConstantPhaseParams>();
            return block_constant_phase(t, p.w11 * t, p.w22 * t, norm_integral(sc, t), p.phi0);
        }
        case CaseKind::LinearPhase: {
            const auto& p = sc.as<LinearPhaseParams>();
            return block_linear_phase(t, p.w11 * t, p.w22 * t, p.eta0, p.w0, p.phi0);
        }
        case CaseKind::GeneralPhase: {
            const auto& p = sc.as<GeneralPhaseParams>();
            double dphi = p.phi1 + 2 * p.phi2 * t;
            double eps = p.phi1 != 0.0 ? (p.phi1 < 0 ? -1.0 : 1.0) : (p.phi2 < 0 ? -1.0 : 1.0);
            if (dphi * eps < 0.0)
                throw ConditionViolated("dphi/ds changes sign before t");
            double phi_t = p.phi0 + p.phi1 * t + p.phi2 * t * t;
            return block_general_phase(t, p.w11 * t, p.w22 * t, p.eta0, p.w0, eps, phi_t,
                                       p.phi0);
        }
        case CaseKind::AllConstant: {
            const auto& p = sc.as<AllConstantParams>();
            return block_all_constant(t, p.w11, p.w22, p.w12);
        }
        case CaseKind::IsotropicConstant: {
            const auto& p = sc.as<IsotropicParams>();
            return block_isotropic(t, std::cos(p.rho0) * std::exp(I * p.theta_alpha0),
                                   std::sin(p.rho0) * std::exp(I * p.theta_beta0));
        }
        case CaseKind::RhoConstant:
        case CaseKind::LogRho: {
            auto view = linear_phase_view(sc);
            return block_time_dependent(t, view->eta0, view->w0, view->phi0,
                                        mixing_state(sc, t));
        }
        default:
            throw ConditionViolated(std::string("no closed S-matrix block for case ") +
                                    std::string(case_name(sc.kind())));
    }
}

SMatrix2 smatrix_from_factors(const FactorSample& f, Ordering ordering) {
    if (!f.chart_valid) throw ChartSingularity("factors invalid at t=" + std::to_string(f.t), f.t);
    cplx ep = std::exp(0.5 * f.Omega), em = std::exp(-0.5 * f.Omega);
    Eigen::Matrix2cd g;
    g << ep + f.Lambda * f.Gamma * em, f.Lambda * em, f.Gamma * em, em;
    cplx ph = std::exp(-0.5 * I * f.alpha);
    SMatrix2 s;
    s.t = f.t;
    if (ordering == Ordering::Standard) {
        Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
        d(0, 0) = std::exp(-0.5 * I * f.rho);
        d(1, 1) = std::exp(0.5 * I * f.rho);
        s.m = ph * d * g;
    } else {
        s.m = ph * g;
    }
    return s;
}

SMatrix2 smatrix_from_factors(const DisentangledFactors& f, double t) {
    for (const auto& s : f.samples)
        if (std::abs(s.t - t) <= 1e-12 * std::max(1.0, std::abs(t)))
            return smatrix_from_factors(s, f.ordering);
    throw DomainError("no factor sample at t=" + std::to_string(t));
}

}  // namespace tmd
