#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tmd/numerics.hpp"

namespace tmd {

enum class CaseKind {
    ConstantPhase,
    LinearPhase,
    GeneralPhase,
    AllConstant,
    IsotropicConstant,
    RhoConstant,
    LogRho,
    QuadraticPhase,
    FresnelNorm,
    Tabulated,
};

std::string_view case_name(CaseKind k);
CaseKind parse_case_name(std::string_view name);

struct CoeffSample {
    double t = 0.0;
    double w11 = 0.0;
    double w22 = 0.0;
    cplx w12{};
    cplx F1{};
    cplx F2{};
    double B = 0.0;

    cplx w21() const { return std::conj(w12); }
};

// Scalar drive: zero, constant, or amp * e^{i(omega t + phase)}.
// The scalar B term uses the real part.
struct Drive {
    enum class Kind { Zero, Constant, Sinusoid };
    Kind kind = Kind::Zero;
    cplx value{};
    double amp = 0.0;
    double omega = 0.0;
    double phase = 0.0;

    static Drive constant(cplx v) { return {Kind::Constant, v, 0, 0, 0}; }
    static Drive sinusoid(double amp, double omega, double phase) {
        return {Kind::Sinusoid, {}, amp, omega, phase};
    }
    cplx operator()(double t) const;
    bool is_zero() const { return kind == Kind::Zero; }
};

struct Drives {
    Drive F1;
    Drive F2;
    Drive B;
};

// eta(s) = eta0 e^{i phi0}; diagonals constant.
struct ConstantPhaseParams {
    double eta0 = 1.0;
    double phi0 = 0.0;
    double w11 = 0.0;
    double w22 = 0.0;
};

// eta(s) = eta0 e^{i(phi0 + w0 s)}.
struct LinearPhaseParams {
    double eta0 = 1.0;
    double w0 = 1.0;
    double phi0 = 0.0;
    double w11 = 0.0;
    double w22 = 0.0;
};

// phi(s) = phi0 + phi1 s + phi2 s^2, |eta| = eps (eta0/w0) dphi/ds.
struct GeneralPhaseParams {
    double eta0 = 1.0;
    double w0 = 1.0;
    double phi0 = 0.0;
    double phi1 = 1.0;
    double phi2 = 0.0;
    double w11 = 0.0;
    double w22 = 0.0;
};

struct AllConstantParams {
    double w11 = 0.0;
    double w22 = 0.0;
    cplx w12{};
};

// alpha = cos(rho0) e^{i theta_alpha0}, beta = sin(rho0) e^{i theta_beta0}.
struct IsotropicParams {
    double rho0 = 0.0;
    double theta_alpha0 = 0.0;
    double theta_beta0 = 0.0;
};

// Mixing angle held at rho0; kappa = w0/(2 eta0).
struct RhoConstantParams {
    double rho0 = 0.5;
    double eta0 = 1.0;
    double w0 = 1.0;
    double theta_alpha0 = 0.0;
    double theta_beta0 = 0.0;
};

// Mixing angle arctan(t0 + s).
struct LogRhoParams {
    double t0 = 1.0;
    double eta0 = 1.0;
    double w0 = 1.0;
    double theta_alpha0 = 0.0;
    double theta_beta0 = 0.0;
};

// eta(s) = eta0 e^{-i theta0 s^2}.
struct QuadraticPhaseParams {
    double eta0 = 1.0;
    double theta0 = 0.5;
    double w11 = 0.0;
    double w22 = 0.0;
};

// |w12| = w12_0 |cos(nu s^2)| on the first lobe nu s^2 < pi/2.
struct FresnelNormParams {
    double w12_0 = 1.0;
    double nu = 1.0;
    double theta_v0 = 0.0;
    double theta_u0 = 0.0;
    double w11 = 0.0;
    double w22 = 0.0;
};

struct TabulatedData;

struct TabulatedParams {
    std::shared_ptr<const TabulatedData> data;
};

// Builds spline tables from CSV columns on a uniform grid starting at t = 0.
TabulatedParams make_tabulated(const std::vector<std::vector<double>>& rows);

using CaseParams =
    std::variant<ConstantPhaseParams, LinearPhaseParams, GeneralPhaseParams, AllConstantParams,
                 IsotropicParams, RhoConstantParams, LogRhoParams, QuadraticPhaseParams,
                 FresnelNormParams, TabulatedParams>;

class Scenario {
public:
    explicit Scenario(CaseParams params, Drives drives = {}, std::optional<cplx> z0 = {});

    CaseKind kind() const;
    const CaseParams& params() const { return params_; }
    const Drives& drives() const { return drives_; }
    std::optional<cplx> z0() const { return z0_; }
    // Upper end of the evaluation domain (may be +inf).
    double t_max() const { return t_max_; }
    bool has_drive() const;

    // Returns a copy with different drives.
    Scenario with_drives(Drives d) const;

    template <class P>
    const P& as() const { return std::get<P>(params_); }

private:
    CaseParams params_;
    Drives drives_;
    std::optional<cplx> z0_;
    double t_max_;
};

CoeffSample eval_coeffs(const Scenario& sc, double t);

struct AlphaRho {
    double alpha = 0.0;
    double rho = 0.0;
};

AlphaRho alpha_rho(const Scenario& sc, double t);
cplx eta(const Scenario& sc, double t);
// Integral of |w12| over [0, t].
double norm_integral(const Scenario& sc, double t);

// Linear-phase picture shared by every case whose eta is, after a monotone change of
// variable tau(s), eta0 e^{i(phi0 + w0 tau)} d tau/ds.
struct LinearPhaseView {
    double eta0 = 0.0;
    double w0 = 0.0;
    double phi0 = 0.0;
    std::function<double(double)> tau;  // tau(0) = 0
};

std::optional<LinearPhaseView> linear_phase_view(const Scenario& sc);
// x = delta tau / 2 with delta = sqrt(4 eta0^2 + w0^2).
double tan_argument(const LinearPhaseView& v, double t);
// First time with tan argument pi/2, or +inf.
double first_tan_pole(const Scenario& sc);

// Phase reference phi(t) for the disentangling condition theta12 = phi + pi/2 - rho.
using PhaseReference = std::function<double(double)>;

struct PhaseConditionReport {
    bool satisfied = true;
    double max_violation = 0.0;
    std::vector<double> violating_times;
};

inline constexpr double kPhaseTolerance = 1e-9;

PhaseReference native_phase(const Scenario& sc);
// phi(t) = phi(0), i.e. the constant-phase condition.
PhaseReference constant_phase_reference(const Scenario& sc);
PhaseConditionReport check_phase_condition(const Scenario& sc, std::span<const double> grid,
                                           const PhaseReference& phi,
                                           double tol = kPhaseTolerance);
PhaseConditionReport check_phase_condition(const Scenario& sc, std::span<const double> grid);

// Time-dependent isotropic family (RhoConstant, LogRho).
struct MixingState {
    double rho_m = 0.0;        // mixing angle
    double theta_alpha = 0.0;
    double theta_beta = 0.0;
    double Phi_tilde = 0.0;
    double Theta_tilde = 0.0;
    double int_sin2 = 0.0;     // integral of sin(2 rho_m)
};

bool is_time_dependent_isotropic(const Scenario& sc);
MixingState mixing_state(const Scenario& sc, double t);
// dphi/ds for the time-dependent isotropic family, from the phase of eta.
double phase_derivative(const Scenario& sc, double t);

}  // namespace tmd
