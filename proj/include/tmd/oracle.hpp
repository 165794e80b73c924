#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tmd/fock.hpp"
#include "tmd/scenario.hpp"
#include "tmd/smatrix.hpp"

namespace tmd {

// Full Hamiltonian on the truncated space, scalar and drive terms included.
TwoModeOperator build_hamiltonian(const FockSpace& space, const CoeffSample& c);

// Midpoint-ordered product prod_k exp(-i H(t_k + dt/2) dt), later factors on the left.
TwoModeOperator brute_force_propagator(const FockSpace& space, const Scenario& sc, double t,
                                       int n_steps,
                                       double truncation_threshold = kDefaultTruncationThreshold);
SMatrix2 brute_force_smatrix(const Scenario& sc, double t, int n_steps);

// max_k |(y_{k+1} - y_{k-1}) / 2h - f(t_k, y_k)| over interior nodes of a uniform grid.
using ScalarRhs = std::function<cplx(double, cplx)>;
double ode_residual(std::span<const double> times, std::span<const cplx> values,
                    const ScalarRhs& rhs);
// Second-order form y'' = f(t, y, y'), with both derivatives taken by centered differences.
using SecondOrderRhs = std::function<cplx(double, cplx, cplx)>;
double ode_residual_second(std::span<const double> times, std::span<const cplx> values,
                           const SecondOrderRhs& rhs);

struct ComparisonReport {
    double max_entry_deviation = 0.0;  // interior block
    std::vector<double> fidelities;
    cplx determinant_ratio{1.0, 0.0};  // det A / det B
    double determinant_deviation = 0.0;
    std::vector<std::string> notes;

    double min_fidelity() const;
};

double fidelity(const FockState& a, const FockState& b);
ComparisonReport compare_operators(const TwoModeOperator& a, const TwoModeOperator& b,
                                   std::span<const FockState> test_states, int margin = 2);

// max |U^dag U - 1| over all entries.
double unitarity_defect(const TwoModeOperator& u);

struct ConvergenceReport {
    std::vector<int> steps;          // n, 2n, 4n
    double coarse_deviation = 0.0;   // |U_n - U_2n| on the interior
    double fine_deviation = 0.0;     // |U_2n - U_4n|
    double ratio = 0.0;
};

// Step-doubling self-convergence; about 4 for a second-order product.
ConvergenceReport self_convergence(const FockSpace& space, const Scenario& sc, double t, int n);

}  // namespace tmd
