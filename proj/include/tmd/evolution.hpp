#pragma once

#include <array>
#include <span>
#include <vector>

#include "tmd/fock.hpp"
#include "tmd/numerics.hpp"
#include "tmd/riccati.hpp"
#include "tmd/scenario.hpp"
#include "tmd/smatrix.hpp"

namespace tmd {

struct CoherentAmplitudes {
    double t = 0.0;
    cplx c1{};
    cplx c2{};
    double chi = 0.0;           // accumulated scalar phase angle
    cplx global_phase{1.0, 0};  // e^{-i chi}

    double norm2() const { return std::norm(c1) + std::norm(c2); }
};

// Displacement coefficients c(t) = S(t) [c~(0) - i int_0^t S^dag F ds] and the scalar phase
// chi(t) = int_0^t [B + (1/2) sum_s (F_s c_s^* + F_s^* c_s)] ds, integrated jointly with S.
std::vector<CoherentAmplitudes> c_coefficients(const Scenario& sc, std::array<cplx, 2> c_tilde0,
                                               std::span<const double> grid, double tol = 1e-10);
CoherentAmplitudes c_coefficients(const Scenario& sc, std::array<cplx, 2> c_tilde0, double t,
                                  double tol = 1e-10);

enum class U0Route {
    Auto,   // factors when the chart is valid, Euler angles otherwise
    Factors,
    Euler,
};

// e^{-i alpha N} [e^{-i rho J3}] e^{Lambda J+} e^{Omega J3} e^{Gamma J-} on the Fock space.
TwoModeOperator u0_from_factors(const FockSpace& space, const FactorSample& f, Ordering ordering);
// e^{-i alpha N} e^{-i phi J3} e^{-i theta Jy} e^{-i psi J3}, angles read off S.
TwoModeOperator u0_from_smatrix(const FockSpace& space, const SMatrix2& s, double alpha);
// alpha recovered from det S; fixes U0 only up to a sign on odd total number.
TwoModeOperator u0_from_smatrix(const FockSpace& space, const SMatrix2& s);

// U(t, 0) = D(c(t)) e^{-i chi(t)} U0(t, 0).
TwoModeOperator assemble_U(const FockSpace& space, const Scenario& sc, double t,
                           double tol = 1e-10, U0Route route = U0Route::Auto,
                           double truncation_threshold = kDefaultTruncationThreshold);

struct CoherentStateSpec {
    cplx Z0{};
    cplx alpha0{1.0, 0.0};
    cplx beta0{};

    static CoherentStateSpec from_angles(cplx z0, double rho0, double theta_alpha0,
                                         double theta_beta0);
    // (Z0 alpha0^*, Z0 beta0^*)
    std::array<cplx, 2> c_initial() const;
};

// Initial ladder data read from an isotropic scenario; Z0 defaults to 1.
CoherentStateSpec coherent_spec(const Scenario& sc);

enum class CoherentCase { Isotropic, TimeDependent, RhoConstant, LogRho };

CoherentAmplitudes coherent_evolution_closed(CoherentCase which, const Scenario& sc,
                                             const CoherentStateSpec& spec, double t);

enum class Ladder {
    GeneralizedLowering,  // (c1^*/Z0^*) a1 + (c2^*/Z0^*) a2
    Initial,              // alpha(0) a1 + beta(0) a2
    Instantaneous,        // alpha(t) a1 + beta(t) a2
};

struct EigenCheck {
    cplx eigenvalue{};
    double residual = 0.0;
};

// Best-fit eigenvalue of op on psi over the interior subspace and the residual
// norm || P (op psi - lambda psi) || for normalized psi.
EigenCheck eigen_check(const TwoModeOperator& op, const FockState& psi, int margin = 2);

TwoModeOperator ladder_operator(const FockSpace& space, Ladder which, const Scenario& sc,
                                const CoherentStateSpec& spec, const CoherentAmplitudes& amp);

// Applies the ladder to the analytic coherent state of the given amplitudes.
EigenCheck ladder_eigenvalue_check(const FockSpace& space, const CoherentStateSpec& spec,
                                   const CoherentAmplitudes& amp, const Scenario& sc,
                                   Ladder which = Ladder::GeneralizedLowering,
                                   double truncation_threshold = kDefaultTruncationThreshold);
// Same, on an explicitly supplied state.
EigenCheck ladder_eigenvalue_check(const FockState& psi, const CoherentStateSpec& spec,
                                   const CoherentAmplitudes& amp, const Scenario& sc,
                                   Ladder which = Ladder::GeneralizedLowering);

struct SpectrumReport {
    double max_deviation = 0.0;
    std::vector<double> levels;            // lowest distinct eigenvalues
    std::vector<int> multiplicities;       // observed
    std::vector<int> expected_multiplicities;
    bool multiplicities_ok = false;
};

// Hermitian A^dag A with A = alpha a1 + beta a2, diagonalized on the complete number
// manifolds n1 + n2 <= n_max - 2; level n then appears n_max - 1 - n times.
TwoModeOperator habeta(const FockSpace& space, cplx alpha, cplx beta);
SpectrumReport habeta_spectrum_check(const FockSpace& space, const CoherentStateSpec& spec,
                                     int k);

}  // namespace tmd
