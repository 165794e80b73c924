#include "tmd/scenario.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/tools/roots.hpp>

#include "tmd/errors.hpp"
#include "tmd/special.hpp"

namespace tmd {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double sign(double x) { return x < 0.0 ? -1.0 : 1.0; }

}  // namespace

struct TabulatedData {
    double t_end = 0.0;
    // w11, w22, re_w12, im_w12, re_F1, im_F1, re_F2, im_F2, B
    std::vector<boost::math::interpolators::cardinal_cubic_b_spline<double>> columns;
};

TabulatedParams make_tabulated(const std::vector<std::vector<double>>& rows) {
    if (rows.size() < 5) throw InsufficientSamples("tabulated scenario needs at least 5 rows");
    for (const auto& r : rows)
        if (r.size() != 10) throw ParseError("tabulated row must have 10 columns");
    if (rows.front()[0] != 0.0) throw ParseError("tabulated grid must start at t = 0");
    double h = rows[1][0] - rows[0][0];
    if (!(h > 0.0)) throw ParseError("tabulated grid must be increasing");
    for (std::size_t k = 1; k < rows.size(); ++k) {
        double hk = rows[k][0] - rows[k - 1][0];
        if (std::abs(hk - h) > 1e-9 * std::max(1.0, h))
            throw ParseError("tabulated grid must be uniform");
    }
    auto data = std::make_shared<TabulatedData>();
    data->t_end = rows.back()[0];
    for (int c = 1; c < 10; ++c) {
        std::vector<double> col;
        col.reserve(rows.size());
        for (const auto& r : rows) col.push_back(r[c]);
        data->columns.emplace_back(col.begin(), col.end(), 0.0, h);
    }
    return {data};
}

std::string_view case_name(CaseKind k) {
    switch (k) {
        case CaseKind::ConstantPhase: return "ConstantPhase";
        case CaseKind::LinearPhase: return "LinearPhase";
        case CaseKind::GeneralPhase: return "GeneralPhase";
        case CaseKind::AllConstant: return "AllConstant";
        case CaseKind::IsotropicConstant: return "IsotropicConstant";
        case CaseKind::RhoConstant: return "RhoConstant";
        case CaseKind::LogRho: return "LogRho";
        case CaseKind::QuadraticPhase: return "QuadraticPhase";
        case CaseKind::FresnelNorm: return "FresnelNorm";
        case CaseKind::Tabulated: return "Tabulated";
    }
    return "?";
}

CaseKind parse_case_name(std::string_view name) {
    for (int k = 0; k <= static_cast<int>(CaseKind::Tabulated); ++k) {
        auto kind = static_cast<CaseKind>(k);
        if (case_name(kind) == name) return kind;
    }
    throw ParseError("unknown scenario case '" + std::string(name) + "'");
}

cplx Drive::operator()(double t) const {
    switch (kind) {
        case Kind::Zero: return 0.0;
        case Kind::Constant: return value;
        case Kind::Sinusoid: return amp * std::exp(I * (omega * t + phase));
    }
    return 0.0;
}

namespace {

double general_phase_eps(const GeneralPhaseParams& p) {
    if (p.phi1 != 0.0) return sign(p.phi1);
    return sign(p.phi2);
}

double validate(const CaseParams& params) {
    return std::visit(
        overloaded{
            [](const ConstantPhaseParams& p) {
                if (!(p.eta0 >= 0.0)) throw DomainError("eta0 must be nonnegative");
                return inf;
            },
            [](const LinearPhaseParams& p) {
                if (!(p.eta0 >= 0.0)) throw DomainError("eta0 must be nonnegative");
                return inf;
            },
            [](const GeneralPhaseParams& p) {
                if (!(p.eta0 > 0.0) || !(p.w0 > 0.0))
                    throw DomainError("GeneralPhase needs eta0 > 0 and w0 > 0");
                if (p.phi1 == 0.0 && p.phi2 == 0.0)
                    throw ConditionViolated("GeneralPhase needs a nonconstant phase");
                // dphi/ds = phi1 + 2 phi2 s may not change sign inside the domain.
                if (p.phi2 != 0.0) {
                    double root = -p.phi1 / (2.0 * p.phi2);
                    if (root > 0.0) return root;
                }
                return inf;
            },
            [](const AllConstantParams&) { return inf; },
            [](const IsotropicParams& p) {
                if (p.rho0 < 0.0 || p.rho0 > pi / 2)
                    throw DomainError("IsotropicConstant needs 0 <= rho0 <= pi/2");
                return inf;
            },
            [](const RhoConstantParams& p) {
                if (!(p.rho0 > 0.0 && p.rho0 < pi / 2))
                    throw DomainError("RhoConstant needs 0 < rho0 < pi/2");
                if (!(p.eta0 > 0.0) || !(p.w0 > 0.0))
                    throw DomainError("RhoConstant needs eta0 > 0 and w0 > 0");
                return inf;
            },
            [](const LogRhoParams& p) {
                if (!(p.t0 > 0.0)) throw DomainError("LogRho needs t0 > 0");
                if (!(p.eta0 > 0.0) || !(p.w0 > 0.0))
                    throw DomainError("LogRho needs eta0 > 0 and w0 > 0");
                return inf;
            },
            [](const QuadraticPhaseParams& p) {
                if (!(p.eta0 > 0.0)) throw DomainError("QuadraticPhase needs eta0 > 0");
                if (p.theta0 == 0.0) throw DomainError("QuadraticPhase needs theta0 != 0");
                return inf;
            },
            [](const FresnelNormParams& p) {
                if (!(p.w12_0 > 0.0) || !(p.nu > 0.0))
                    throw DomainError("FresnelNorm needs w12_0 > 0 and nu > 0");
                return std::sqrt(pi / (2.0 * p.nu));
            },
            [](const TabulatedParams& p) {
                if (!p.data) throw DomainError("tabulated scenario without data");
                return p.data->t_end;
            },
        },
        params);
}

}  // namespace

Scenario::Scenario(CaseParams params, Drives drives, std::optional<cplx> z0)
    : params_(std::move(params)), drives_(drives), z0_(z0), t_max_(validate(params_)) {}

CaseKind Scenario::kind() const { return static_cast<CaseKind>(params_.index()); }

bool Scenario::has_drive() const {
    if (kind() == CaseKind::Tabulated) return true;
    return !(drives_.F1.is_zero() && drives_.F2.is_zero() && drives_.B.is_zero());
}

Scenario Scenario::with_drives(Drives d) const { return Scenario(params_, d, z0_); }

namespace {

void check_domain(const Scenario& sc, double t) {
    if (!(t >= 0.0) || t > sc.t_max() * (1.0 + 1e-12) + 1e-12)
        throw DomainError("t=" + std::to_string(t) + " outside the scenario domain [0, " +
                          std::to_string(sc.t_max()) + "]");
}

struct LogRhoIntegrals {
    double sin2;
    double cos2;
};

LogRhoIntegrals log_rho_integrals(double t0, double t) {
    double x = t0 + t;
    return {std::log((1.0 + x * x) / (1.0 + t0 * t0)),
            2.0 * (std::atan(x) - std::atan(t0)) - t};
}

double fresnel_varrho_arg(const FresnelNormParams& p, double t) {
    double scale = std::sqrt(pi / (2.0 * p.nu));
    return p.w12_0 * scale * fresnel_c(t / scale).value.real();
}

// Gudermannian of the norm integral.
double fresnel_varrho(const FresnelNormParams& p, double t) {
    return 2.0 * std::atan(std::tanh(0.5 * fresnel_varrho_arg(p, t)));
}

}  // namespace

MixingState mixing_state(const Scenario& sc, double t) {
    auto fill = [t](double rho_m, double is2, double ic2, double eta0, double w0, double ta0,
                    double tb0) {
        (void)t;
        MixingState m;
        double kappa = w0 / (2.0 * eta0);
        double delta = std::sqrt(4.0 * eta0 * eta0 + w0 * w0);
        m.rho_m = rho_m;
        m.int_sin2 = is2;
        m.Phi_tilde = delta / (4.0 * eta0) * is2;
        m.Theta_tilde = kappa * is2 - ic2;
        m.theta_alpha = ta0 - 0.5 * m.Theta_tilde;
        m.theta_beta = tb0 + 0.5 * m.Theta_tilde;
        return m;
    };
    if (const auto* p = std::get_if<RhoConstantParams>(&sc.params())) {
        return fill(p->rho0, std::sin(2 * p->rho0) * t, std::cos(2 * p->rho0) * t, p->eta0,
                    p->w0, p->theta_alpha0, p->theta_beta0);
    }
    if (const auto* p = std::get_if<LogRhoParams>(&sc.params())) {
        auto in = log_rho_integrals(p->t0, t);
        return fill(std::atan(p->t0 + t), in.sin2, in.cos2, p->eta0, p->w0, p->theta_alpha0,
                    p->theta_beta0);
    }
    throw ConditionViolated("mixing state requested for a case outside the isotropic family");
}

bool is_time_dependent_isotropic(const Scenario& sc) {
    return sc.kind() == CaseKind::RhoConstant || sc.kind() == CaseKind::LogRho;
}

double phase_derivative(const Scenario& sc, double t) {
    auto m = mixing_state(sc, t);
    double eta0 = 0, w0 = 0;
    if (const auto* p = std::get_if<RhoConstantParams>(&sc.params())) eta0 = p->eta0, w0 = p->w0;
    if (const auto* p = std::get_if<LogRhoParams>(&sc.params())) eta0 = p->eta0, w0 = p->w0;
    return w0 / (2.0 * eta0) * std::sin(2.0 * m.rho_m);
}

AlphaRho alpha_rho(const Scenario& sc, double t) {
    check_domain(sc, t);
    auto diag = [t](double w11, double w22) { return AlphaRho{(w11 + w22) * t, (w11 - w22) * t}; };
    return std::visit(
        overloaded{
            [&](const ConstantPhaseParams& p) { return diag(p.w11, p.w22); },
            [&](const LinearPhaseParams& p) { return diag(p.w11, p.w22); },
            [&](const GeneralPhaseParams& p) { return diag(p.w11, p.w22); },
            [&](const AllConstantParams& p) { return diag(p.w11, p.w22); },
            [&](const IsotropicParams& p) {
                return diag(std::pow(std::cos(p.rho0), 2), std::pow(std::sin(p.rho0), 2));
            },
            [&](const RhoConstantParams& p) { return AlphaRho{t, std::cos(2 * p.rho0) * t}; },
            [&](const LogRhoParams& p) { return AlphaRho{t, log_rho_integrals(p.t0, t).cos2}; },
            [&](const QuadraticPhaseParams& p) { return diag(p.w11, p.w22); },
            [&](const FresnelNormParams& p) { return diag(p.w11, p.w22); },
            [&](const TabulatedParams& p) {
                const auto& c = p.data->columns;
                double a = integrate([&](double s) { return c[0](s) + c[1](s); }, 0.0, t);
                double r = integrate([&](double s) { return c[0](s) - c[1](s); }, 0.0, t);
                return AlphaRho{a, r};
            },
        },
        sc.params());
}

CoeffSample eval_coeffs(const Scenario& sc, double t) {
    check_domain(sc, t);
    CoeffSample c;
    c.t = t;
    // Cases defined through eta: w12 = i eta e^{-i rho}.
    auto from_eta = [&](double w11, double w22, cplx eta_t) {
        c.w11 = w11;
        c.w22 = w22;
        c.w12 = I * eta_t * std::exp(-I * (w11 - w22) * t);
    };
    std::visit(
        overloaded{
            [&](const ConstantPhaseParams& p) {
                from_eta(p.w11, p.w22, p.eta0 * std::exp(I * p.phi0));
            },
            [&](const LinearPhaseParams& p) {
                from_eta(p.w11, p.w22, p.eta0 * std::exp(I * (p.phi0 + p.w0 * t)));
            },
            [&](const GeneralPhaseParams& p) {
                double phi = p.phi0 + p.phi1 * t + p.phi2 * t * t;
                double dphi = p.phi1 + 2.0 * p.phi2 * t;
                double norm = general_phase_eps(p) * p.eta0 / p.w0 * dphi;
                from_eta(p.w11, p.w22, std::max(norm, 0.0) * std::exp(I * phi));
            },
            [&](const AllConstantParams& p) {
                c.w11 = p.w11;
                c.w22 = p.w22;
                c.w12 = p.w12;
            },
            [&](const IsotropicParams& p) {
                cplx a = std::cos(p.rho0) * std::exp(I * p.theta_alpha0);
                cplx b = std::sin(p.rho0) * std::exp(I * p.theta_beta0);
                c.w11 = std::norm(a);
                c.w22 = std::norm(b);
                c.w12 = std::conj(a) * b;
            },
            [&](const RhoConstantParams&) {},
            [&](const LogRhoParams&) {},
            [&](const QuadraticPhaseParams& p) {
                from_eta(p.w11, p.w22, p.eta0 * std::exp(-I * p.theta0 * t * t));
            },
            [&](const FresnelNormParams& p) {
                double vr = fresnel_varrho(p, t);
                double theta12 = 3.0 * vr - std::tan(vr) + p.theta_v0 - p.theta_u0 - pi / 2 -
                                 (p.w11 - p.w22) * t;
                c.w11 = p.w11;
                c.w22 = p.w22;
                c.w12 = p.w12_0 * std::abs(std::cos(p.nu * t * t)) * std::exp(I * theta12);
            },
            [&](const TabulatedParams& p) {
                const auto& col = p.data->columns;
                double tt = std::min(t, p.data->t_end);
                c.w11 = col[0](tt);
                c.w22 = col[1](tt);
                c.w12 = {col[2](tt), col[3](tt)};
                c.F1 = {col[4](tt), col[5](tt)};
                c.F2 = {col[6](tt), col[7](tt)};
                c.B = col[8](tt);
            },
        },
        sc.params());
    if (is_time_dependent_isotropic(sc)) {
        auto m = mixing_state(sc, t);
        double cr = std::cos(m.rho_m), sr = std::sin(m.rho_m);
        c.w11 = cr * cr;
        c.w22 = sr * sr;
        c.w12 = cr * sr * std::exp(I * (m.theta_beta - m.theta_alpha));
    }
    if (sc.kind() != CaseKind::Tabulated) {
        c.F1 = sc.drives().F1(t);
        c.F2 = sc.drives().F2(t);
        c.B = sc.drives().B(t).real();
    }
    return c;
}

cplx eta(const Scenario& sc, double t) {
    auto c = eval_coeffs(sc, t);
    return -I * c.w12 * std::exp(I * alpha_rho(sc, t).rho);
}

double norm_integral(const Scenario& sc, double t) {
    check_domain(sc, t);
    return std::visit(
        overloaded{
            [&](const ConstantPhaseParams& p) { return p.eta0 * t; },
            [&](const LinearPhaseParams& p) { return p.eta0 * t; },
            [&](const GeneralPhaseParams& p) {
                double tilde = p.phi1 * t + p.phi2 * t * t;
                return general_phase_eps(p) * p.eta0 / p.w0 * tilde;
            },
            [&](const AllConstantParams& p) { return std::abs(p.w12) * t; },
            [&](const IsotropicParams& p) { return 0.5 * std::sin(2 * p.rho0) * t; },
            [&](const RhoConstantParams&) { return 0.5 * mixing_state(sc, t).int_sin2; },
            [&](const LogRhoParams&) { return 0.5 * mixing_state(sc, t).int_sin2; },
            [&](const QuadraticPhaseParams& p) { return p.eta0 * t; },
            [&](const FresnelNormParams& p) { return fresnel_varrho_arg(p, t); },
            [&](const TabulatedParams& p) {
                const auto& col = p.data->columns;
                return integrate([&](double s) { return std::hypot(col[2](s), col[3](s)); }, 0.0,
                                 t);
            },
        },
        sc.params());
}

std::optional<LinearPhaseView> linear_phase_view(const Scenario& sc) {
    auto identity = [](double s) { return s; };
    switch (sc.kind()) {
        case CaseKind::ConstantPhase: {
            const auto& p = sc.as<ConstantPhaseParams>();
            return LinearPhaseView{p.eta0, 0.0, p.phi0, identity};
        }
        case CaseKind::LinearPhase: {
            const auto& p = sc.as<LinearPhaseParams>();
            return LinearPhaseView{p.eta0, p.w0, p.phi0, identity};
        }
        case CaseKind::GeneralPhase: {
            const auto p = sc.as<GeneralPhaseParams>();
            double eps = general_phase_eps(p);
            return LinearPhaseView{p.eta0, eps * p.w0, p.phi0, [p, eps](double s) {
                                       return eps * (p.phi1 * s + p.phi2 * s * s) / p.w0;
                                   }};
        }
        case CaseKind::AllConstant:
        case CaseKind::IsotropicConstant: {
            auto c = eval_coeffs(sc, 0.0);
            return LinearPhaseView{std::abs(c.w12), c.w11 - c.w22,
                                   std::arg(c.w12) - pi / 2, identity};
        }
        case CaseKind::RhoConstant:
        case CaseKind::LogRho: {
            double eta0 = 0, w0 = 0, ta0 = 0, tb0 = 0;
            if (const auto* p = std::get_if<RhoConstantParams>(&sc.params()))
                eta0 = p->eta0, w0 = p->w0, ta0 = p->theta_alpha0, tb0 = p->theta_beta0;
            if (const auto* p = std::get_if<LogRhoParams>(&sc.params()))
                eta0 = p->eta0, w0 = p->w0, ta0 = p->theta_alpha0, tb0 = p->theta_beta0;
            Scenario copy = sc;
            return LinearPhaseView{eta0, w0, tb0 - ta0 - pi / 2, [copy, eta0](double s) {
                                       return mixing_state(copy, s).int_sin2 / (2.0 * eta0);
                                   }};
        }
        default:
            return std::nullopt;
    }
}

double tan_argument(const LinearPhaseView& v, double t) {
    double delta = std::sqrt(4.0 * v.eta0 * v.eta0 + v.w0 * v.w0);
    return 0.5 * delta * v.tau(t);
}

double first_tan_pole(const Scenario& sc) {
    auto v = linear_phase_view(sc);
    if (!v || v->eta0 == 0.0) return inf;
    auto f = [&](double t) { return tan_argument(*v, t) - pi / 2; };
    double hi = 1.0;
    while (f(hi) < 0.0) {
        hi *= 2.0;
        if (hi > sc.t_max() || hi > 1e12) return inf;
    }
    double lo = hi / 2.0;
    while (lo > 1e-300 && f(lo) > 0.0) lo /= 2.0;
    if (f(lo) > 0.0) lo = 0.0;
    boost::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(
        f, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (r.first + r.second);
}

PhaseReference native_phase(const Scenario& sc) {
    switch (sc.kind()) {
        case CaseKind::QuadraticPhase: {
            double th = sc.as<QuadraticPhaseParams>().theta0;
            return [th](double t) { return -th * t * t; };
        }
        case CaseKind::FresnelNorm: {
            auto p = sc.as<FresnelNormParams>();
            return [p](double t) {
                double vr = fresnel_varrho(p, t);
                return 3.0 * vr - std::tan(vr) + p.theta_v0 - p.theta_u0 - pi;
            };
        }
        case CaseKind::Tabulated:
            return constant_phase_reference(sc);
        default:
            break;
    }
    auto v = linear_phase_view(sc);
    if (!v) return constant_phase_reference(sc);
    auto view = *v;
    return [view](double t) { return view.phi0 + view.w0 * view.tau(t); };
}

PhaseReference constant_phase_reference(const Scenario& sc) {
    auto c = eval_coeffs(sc, 0.0);
    double phi = std::arg(c.w12) - pi / 2;
    return [phi](double) { return phi; };
}

PhaseConditionReport check_phase_condition(const Scenario& sc, std::span<const double> grid,
                                           const PhaseReference& phi, double tol) {
    PhaseConditionReport rep;
    for (double t : grid) {
        auto c = eval_coeffs(sc, t);
        if (std::abs(c.w12) < 1e-14) continue;
        double rho = alpha_rho(sc, t).rho;
        double v = std::abs(wrap_phase(std::arg(c.w12) - (phi(t) + pi / 2 - rho)));
        rep.max_violation = std::max(rep.max_violation, v);
        if (v > tol) rep.violating_times.push_back(t);
    }
    rep.satisfied = rep.max_violation <= tol;
    return rep;
}

PhaseConditionReport check_phase_condition(const Scenario& sc, std::span<const double> grid) {
    return check_phase_condition(sc, grid, native_phase(sc));
}

}  // namespace tmd
