#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tmd/numerics.hpp"
#include "tmd/scenario.hpp"

namespace tmd {

// Standard: U0 = e^{-i alpha N} e^{-i rho J3} e^{Lambda J+} e^{Omega J3} e^{Gamma J-}.
// Alternative: U0 = e^{-i alpha N} e^{Lambda~ J+} e^{Omega~ J3} e^{Gamma~ J-}, with
// Lambda~ = e^{-i rho} Lambda, Omega~ = Omega - i rho, Gamma~ = Gamma.
enum class Ordering { Standard, Alternative };

struct FactorTriple {
    cplx Lambda{};
    cplx Omega{};
    cplx Gamma{};
};

struct FactorSample {
    double t = 0.0;
    double alpha = 0.0;
    double rho = 0.0;
    cplx Lambda{};
    cplx Omega{};
    cplx Gamma{};
    bool chart_valid = true;

    FactorTriple triple() const { return {Lambda, Omega, Gamma}; }
};

struct DisentangledFactors {
    Ordering ordering = Ordering::Standard;
    std::vector<FactorSample> samples;
    std::optional<double> singular_time;
};

// |Lambda| above this marks a chart singularity.
inline constexpr double kChartBlowup = 1e8;

// Integrates (alpha, rho, Lambda, Omega, Gamma) as one system from zero initial data.
// Stops at the first chart singularity; later samples are flagged invalid.
DisentangledFactors solve_riccati_numeric(const Scenario& sc, std::span<const double> grid,
                                          double tol);
DisentangledFactors solve_riccati_numeric(const Scenario& sc, double t_end, double tol,
                                          std::size_t n_grid = 201);

DisentangledFactors to_alternative(const DisentangledFactors& standard);

// Closed Standard-ordering factors for every case reducible to a linear phase in a
// reparameterized time (ConstantPhase, LinearPhase, GeneralPhase, AllConstant and the
// isotropic families). Past the first tan pole only when extended_chart is set.
FactorTriple closed_factors(const Scenario& sc, double t, bool extended_chart = false);

struct ConjugacyResidual {
    double gamma_plus_conj_lambda = 0.0;  // max |Gamma + Lambda^*|
    double max_imag_omega = 0.0;          // max |Im Omega|
};

ConjugacyResidual gamma_conjugacy_check(const DisentangledFactors& f);

// Alternative-ordering factors when theta_u = 0 (constant eta phase).
FactorTriple alt_factors_theta_u_zero(const Scenario& sc, double t);

struct QuadraticPhaseU {
    cplx u{};
    cplx u_dot{};
};

// u(s) = 1F1(i eta0^2/(4 theta0), 1/2, i theta0 s^2) and its derivative.
QuadraticPhaseU quadratic_phase_u(double eta0, double theta0, double s);
FactorTriple alt_factors_quadratic_phase(double eta0, double theta0, const Scenario& sc,
                                         double t);
FactorTriple alt_factors_quadratic_phase(const Scenario& sc, double t);

struct FresnelAngles {
    double varrho = 0.0;
    double theta_v = 0.0;
    double theta_u = 0.0;
};

FresnelAngles fresnel_angles(const FresnelNormParams& p, double t);
// Validates the phase restriction against the coefficients of sc.
FactorTriple alt_factors_fresnel(const FresnelNormParams& p, const Scenario& sc, double t);
FactorTriple alt_factors_fresnel(const Scenario& sc, double t);

// Closed factors sampled on a grid in the case's natural ordering, with Omega's
// imaginary part unwrapped. Samples past a singularity are flagged invalid.
DisentangledFactors sample_closed_factors(const Scenario& sc, std::span<const double> grid,
                                          bool extended_chart = false);

// Ordering used by sample_closed_factors, or nullopt when no closed form exists.
std::optional<Ordering> closed_ordering(const Scenario& sc);

}  // namespace tmd
