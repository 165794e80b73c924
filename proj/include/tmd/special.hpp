#pragma once

#include "tmd/numerics.hpp"

namespace tmd {

struct SpecialValue {
    cplx value{};
    int terms = 0;
    double truncation_bound = 0.0;
};

// Largest |z| (and (pi/2) x^2 for the Fresnel series) summed directly.
inline constexpr double kSeriesRadius = 30.0;

// Confluent hypergeometric 1F1(a; b; z) by its power series with compensated summation.
// Stops once the geometric tail bound falls below tol * max(1, |partial sum|).
SpecialValue kummer_1f1(cplx a, cplx b, cplx z, double tol = 1e-15);

// Fresnel cosine integral C(x) = int_0^x cos(pi tau^2 / 2) d tau by its alternating series.
SpecialValue fresnel_c(double x, double tol = 1e-15);

}  // namespace tmd
