#include "tmd/riccati.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "tmd/errors.hpp"
#include "tmd/special.hpp"

namespace tmd {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

FactorSample invalid_sample(const Scenario& sc, double t) {
    auto ar = alpha_rho(sc, t);
    return {t, ar.alpha, ar.rho, {nan, nan}, {nan, nan}, {nan, nan}, false};
}

}  // namespace

DisentangledFactors solve_riccati_numeric(const Scenario& sc, std::span<const double> grid,
                                          double tol) {
    if (grid.empty() || grid.front() != 0.0)
        throw DomainError("Riccati grid must start at t = 0");
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");

    // y = (alpha, rho, Lambda, Omega, Gamma)
    OdeRhs rhs = [&sc](double t, const OdeState& y, OdeState& dy) {
        auto c = eval_coeffs(sc, std::min(t, sc.t_max()));
        cplx e = -I * c.w12 * std::exp(I * y[1].real());
        cplx ec = std::conj(e);
        dy.resize(5);
        dy[0] = c.w11 + c.w22;
        dy[1] = c.w11 - c.w22;
        dy[2] = e + ec * y[2] * y[2];
        dy[3] = 2.0 * ec * y[2];
        dy[4] = -ec * std::exp(y[3]);
    };
    OdeOptions opts;
    opts.rtol = tol;
    opts.atol = tol;
    StepObserver stop = [](double, const OdeState& y) { return std::abs(y[2]) <= kChartBlowup; };
    OdeState y0 = OdeState::Zero(5);
    auto res = integrate_dopri5(rhs, y0, grid, opts, stop);

    DisentangledFactors out;
    out.ordering = Ordering::Standard;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (k < res.samples.size()) {
            const auto& y = res.samples[k];
            out.samples.push_back({grid[k], y[0].real(), y[1].real(), y[2], y[3], y[4], true});
        } else {
            out.samples.push_back(invalid_sample(sc, grid[k]));
        }
    }
    if (res.stopped) out.singular_time = res.stop_time;
    return out;
}

DisentangledFactors solve_riccati_numeric(const Scenario& sc, double t_end, double tol,
                                          std::size_t n_grid) {
    auto g = uniform_grid(t_end, n_grid);
    return solve_riccati_numeric(sc, g, tol);
}

DisentangledFactors to_alternative(const DisentangledFactors& standard) {
    if (standard.ordering != Ordering::Standard)
        throw DomainError("factors are already in the alternative ordering");
    DisentangledFactors out = standard;
    out.ordering = Ordering::Alternative;
    for (auto& s : out.samples) {
        s.Lambda *= std::exp(-I * s.rho);
        s.Omega -= I * s.rho;
    }
    return out;
}

FactorTriple closed_factors(const Scenario& sc, double t, bool extended_chart) {
    auto view = linear_phase_view(sc);
    if (!view)
        throw ConditionViolated(std::string("no closed standard-ordering factors for case ") +
                                std::string(case_name(sc.kind())));
    if (!(t >= 0.0) || t > sc.t_max()) throw DomainError("t outside the scenario domain");
    if (view->eta0 == 0.0 || t == 0.0) return {};

    const double eta0 = view->eta0, w0 = view->w0, phi0 = view->phi0;
    const double delta = std::sqrt(4.0 * eta0 * eta0 + w0 * w0);
    const double tau = view->tau(t);
    const double x = 0.5 * delta * tau;
    if (!extended_chart && x >= pi / 2)
        throw ChartSingularity("t is past the first tan pole; request the extended chart",
                               first_tan_pole(sc));

    const double k = w0 / delta;
    const cplx d(std::cos(x), k * std::sin(x));  // e^{-Omega/2} e^{i w0 tau/2}
    const cplx lt = 2.0 * eta0 * std::sin(x) / (delta * d);
    if (!(std::abs(lt) <= kChartBlowup))
        throw ChartSingularity("Lambda diverges at a tan pole", t);

    // Continuous argument of d along x: reduce to |x'| <= pi/2, then add n pi sign(w0).
    const double n = std::round(x / pi);
    const double xr = x - n * pi;
    const double arg_d = std::atan2(k * std::sin(xr), std::cos(xr)) + n * pi * (w0 < 0 ? -1 : 1);
    const double log_abs_d = std::log(std::abs(d));

    FactorTriple f;
    f.Lambda = std::exp(I * (phi0 + w0 * tau)) * lt;
    f.Omega = cplx(-2.0 * log_abs_d, -2.0 * arg_d + w0 * tau);
    f.Gamma = -std::exp(-I * phi0) * lt;
    return f;
}

ConjugacyResidual gamma_conjugacy_check(const DisentangledFactors& f) {
    ConjugacyResidual r;
    for (const auto& s : f.samples) {
        if (!s.chart_valid) continue;
        r.gamma_plus_conj_lambda =
            std::max(r.gamma_plus_conj_lambda, std::abs(s.Gamma + std::conj(s.Lambda)));
        r.max_imag_omega = std::max(r.max_imag_omega, std::abs(s.Omega.imag()));
    }
    return r;
}

FactorTriple alt_factors_theta_u_zero(const Scenario& sc, double t) {
    auto c0 = eval_coeffs(sc, 0.0);
    auto ct = eval_coeffs(sc, t);
    const double rho = alpha_rho(sc, t).rho;
    if (std::abs(c0.w12) == 0.0) {
        if (norm_integral(sc, t) == 0.0) return {0.0, -I * rho, 0.0};
        throw ConditionViolated("theta_u = 0 case needs w12(0) != 0 to fix theta_v0");
    }
    const double theta_v0 = pi / 2 + std::arg(c0.w12);
    if (std::abs(ct.w12) > 0.0) {
        double v = std::abs(wrap_phase(pi / 2 + std::arg(ct.w12) + rho - theta_v0));
        if (v > kPhaseTolerance)
            throw ConditionViolated("theta_v0 constraint violated at t=" + std::to_string(t));
    }
    const double vr = norm_integral(sc, t);
    if (vr >= pi / 2) throw ChartSingularity("varrho reached pi/2", t);
    const double tn = std::abs(std::tan(vr));
    if (tn > kChartBlowup) throw ChartSingularity("tan(varrho) diverges", t);
    FactorTriple f;
    f.Lambda = -tn * std::exp(I * theta_v0) * std::exp(-I * rho);
    f.Omega = cplx(-2.0 * std::log(std::cos(vr)), -rho);
    f.Gamma = tn * std::exp(-I * theta_v0);
    return f;
}

QuadraticPhaseU quadratic_phase_u(double eta0, double theta0, double s) {
    if (theta0 == 0.0) throw DomainError("theta0 must be nonzero");
    const cplx a = I * eta0 * eta0 / (4.0 * theta0);
    const cplx z = I * theta0 * s * s;
    QuadraticPhaseU r;
    r.u = kummer_1f1(a, 0.5, z).value;
    r.u_dot = -eta0 * eta0 * s * kummer_1f1(a + 1.0, 1.5, z).value;
    return r;
}

FactorTriple alt_factors_quadratic_phase(double eta0, double theta0, const Scenario& sc,
                                         double t) {
    if (!(eta0 > 0.0) || theta0 == 0.0) throw DomainError("need eta0 > 0 and theta0 != 0");
    if (t == 0.0) return {};
    // eta must be eta0 e^{-i theta0 s^2} for the hypergeometric solution to apply.
    for (double s : {0.0, 0.5 * t, t}) {
        if (std::abs(eta(sc, s) - eta0 * std::exp(-I * theta0 * s * s)) > 1e-9)
            throw ConditionViolated("scenario eta is not eta0 e^{-i theta0 s^2}");
    }
    const double rho = alpha_rho(sc, t).rho;
    auto ut = quadratic_phase_u(eta0, theta0, t);
    if (std::abs(ut.u) < 1.0 / kChartBlowup) throw ChartSingularity("u(t) vanishes", t);
    const cplx lambda = -ut.u_dot / (ut.u * eta0 * std::exp(I * theta0 * t * t));
    if (std::abs(lambda) > kChartBlowup) throw ChartSingularity("Lambda diverges", t);

    const cplx gamma = integrate_complex(
        [&](double s) {
            cplx u = quadratic_phase_u(eta0, theta0, s).u;
            return -eta0 * std::exp(I * theta0 * s * s) / (u * u);
        },
        0.0, t, 1e-12);

    FactorTriple f;
    f.Lambda = std::exp(-I * rho) * lambda;
    f.Omega = -2.0 * std::log(ut.u) - I * rho;
    f.Gamma = gamma;
    return f;
}

FactorTriple alt_factors_quadratic_phase(const Scenario& sc, double t) {
    const auto& p = sc.as<QuadraticPhaseParams>();
    return alt_factors_quadratic_phase(p.eta0, p.theta0, sc, t);
}

FresnelAngles fresnel_angles(const FresnelNormParams& p, double t) {
    if (t < 0.0 || p.nu * t * t > pi / 2 * (1.0 + 1e-12))
        throw DomainError("Fresnel closed form holds on the first lobe nu t^2 <= pi/2 only");
    const double scale = std::sqrt(pi / (2.0 * p.nu));
    const double integral = p.w12_0 * scale * fresnel_c(t / scale).value.real();
    FresnelAngles a;
    a.varrho = 2.0 * std::atan(std::tanh(0.5 * integral));
    a.theta_v = a.varrho + p.theta_v0;
    a.theta_u = std::tan(a.varrho) - a.varrho + p.theta_u0;
    return a;
}

FactorTriple alt_factors_fresnel(const FresnelNormParams& p, const Scenario& sc, double t) {
    auto a = fresnel_angles(p, t);
    auto c = eval_coeffs(sc, t);
    const double rho = alpha_rho(sc, t).rho;
    const double expect_norm = p.w12_0 * std::abs(std::cos(p.nu * t * t));
    if (std::abs(std::abs(c.w12) - expect_norm) > 1e-9)
        throw ConditionViolated("scenario |w12| does not follow w12_0 |cos(nu s^2)|");
    if (std::abs(c.w12) > 0.0) {
        double lhs = 3.0 * a.varrho - std::tan(a.varrho) + p.theta_v0 - p.theta_u0;
        double v = std::abs(wrap_phase(lhs - (pi / 2 + std::arg(c.w12) + rho)));
        if (v > kPhaseTolerance)
            throw ConditionViolated("Fresnel phase restriction violated at t=" +
                                    std::to_string(t));
    }
    const double tn = std::abs(std::tan(a.varrho));
    if (tn > kChartBlowup) throw ChartSingularity("varrho reached pi/2", t);
    // The factor set needs u(0) = 1, so both phases are measured from theta_u0.
    const double tv = a.theta_v - p.theta_u0;
    const double tu = a.theta_u - p.theta_u0;
    FactorTriple f;
    f.Lambda = -tn * std::exp(I * (tv - tu)) * std::exp(-I * rho);
    f.Omega = cplx(-2.0 * std::log(std::cos(a.varrho)), -2.0 * tu - rho);
    f.Gamma = tn * std::exp(-I * (tv + tu));
    return f;
}

FactorTriple alt_factors_fresnel(const Scenario& sc, double t) {
    return alt_factors_fresnel(sc.as<FresnelNormParams>(), sc, t);
}

std::optional<Ordering> closed_ordering(const Scenario& sc) {
    switch (sc.kind()) {
        case CaseKind::QuadraticPhase:
        case CaseKind::FresnelNorm:
            return Ordering::Alternative;
        case CaseKind::Tabulated:
            return std::nullopt;
        default:
            return Ordering::Standard;
    }
}

DisentangledFactors sample_closed_factors(const Scenario& sc, std::span<const double> grid,
                                          bool extended_chart) {
    auto ord = closed_ordering(sc);
    if (!ord)
        throw ConditionViolated(std::string("no closed factors for case ") +
                                std::string(case_name(sc.kind())));
    DisentangledFactors out;
    out.ordering = *ord;
    bool broken = false;
    double prev_im = 0.0;
    for (double t : grid) {
        if (broken) {
            out.samples.push_back(invalid_sample(sc, t));
            continue;
        }
        try {
            FactorTriple f;
            if (sc.kind() == CaseKind::QuadraticPhase) f = alt_factors_quadratic_phase(sc, t);
            else if (sc.kind() == CaseKind::FresnelNorm) f = alt_factors_fresnel(sc, t);
            else f = closed_factors(sc, t, extended_chart);
            // e^{Omega/2} is invariant under 4 pi shifts of Im Omega, not 2 pi.
            double im = f.Omega.imag();
            if (!out.samples.empty())
                im -= 4.0 * pi * std::round((im - prev_im) / (4.0 * pi));
            prev_im = im;
            f.Omega = {f.Omega.real(), im};
            auto ar = alpha_rho(sc, t);
            out.samples.push_back({t, ar.alpha, ar.rho, f.Lambda, f.Omega, f.Gamma, true});
        } catch (const ChartSingularity& e) {
            broken = true;
            out.singular_time = e.time();
            out.samples.push_back(invalid_sample(sc, t));
        }
    }
    return out;
}

}  // namespace tmd
