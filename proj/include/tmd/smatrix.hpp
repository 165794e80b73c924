#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tmd/numerics.hpp"
#include "tmd/riccati.hpp"
#include "tmd/scenario.hpp"

namespace tmd {

// 2x2 propagator on the j = 1/2 carrier, basis (|+>, |->).
struct SMatrix2 {
    double t = 0.0;
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
    bool reunitarized = false;

    cplx operator()(int i, int j) const { return m(i, j); }
    double unitarity_defect() const;
    cplx det() const { return m.determinant(); }
};

// Single-particle generator [[w11, w12], [w21, w22]].
Eigen::Matrix2cd generator_matrix(const CoeffSample& c);

// Solves i dS/ds = W(s) S from S(t_from) = I. Projects back onto U(2) if the
// unitarity defect exceeds 10 tol.
SMatrix2 smatrix_numeric(const Scenario& sc, double t, double tol = 1e-10);
std::vector<SMatrix2> smatrix_numeric(const Scenario& sc, std::span<const double> grid,
                                      double tol = 1e-10);
SMatrix2 smatrix_numeric_between(const Scenario& sc, double t_from, double t_to,
                                 double tol = 1e-10);

// Closed S-matrix elements for ConstantPhase, LinearPhase, GeneralPhase, AllConstant,
// IsotropicConstant, RhoConstant and LogRho.
SMatrix2 smatrix_closed(const Scenario& sc, double t);

// e^{-i alpha/2} [diag(e^{-i rho/2}, e^{i rho/2})] [[e^{W/2} + L G e^{-W/2}, L e^{-W/2}],
// [G e^{-W/2}, e^{-W/2}]], the diagonal rho factor only in the standard ordering.
SMatrix2 smatrix_from_factors(const FactorSample& f, Ordering ordering);
SMatrix2 smatrix_from_factors(const DisentangledFactors& f, double t);

// Projection onto the nearest unitary (polar factor).
Eigen::Matrix2cd polar_unitary(const Eigen::Matrix2cd& m);

}  // namespace tmd
