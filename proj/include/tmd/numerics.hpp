#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace tmd {

using cplx = std::complex<double>;
inline constexpr cplx I{0.0, 1.0};

// Maps an angle to (-pi, pi].
double wrap_phase(double x);

// Removes 2*pi jumps between consecutive entries.
std::vector<double> unwrap(std::span<const double> phases);

// n points, evenly spaced on [0, t_end].
std::vector<double> uniform_grid(double t_end, std::size_t n);

// Adaptive Gauss-Kronrod on [a, b]; throws QuadratureError when the error
// estimate stays above abs_tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10);
cplx integrate_complex(const std::function<cplx(double)>& f, double a, double b,
                       double abs_tol = 1e-10);

using OdeState = Eigen::VectorXcd;
using OdeRhs = std::function<void(double t, const OdeState& y, OdeState& dydt)>;
// Called after every accepted step. Returning false stops the integration.
using StepObserver = std::function<bool(double t, const OdeState& y)>;

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 0.0;  // 0 picks a starting step automatically
    std::size_t max_steps = 5'000'000;
};

struct OdeResult {
    std::vector<OdeState> samples;  // one per output time reached
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    bool stopped = false;  // observer asked to stop
    double stop_time = 0.0;
    OdeState stop_state;
};

// Dormand-Prince 5(4). times[0] is the initial time; y0 is the state there.
// Steps are shortened to land exactly on every output time.
OdeResult integrate_dopri5(const OdeRhs& rhs, const OdeState& y0, std::span<const double> times,
                           const OdeOptions& opts, const StepObserver& observer = {});

// Max-entry norm.
double max_abs(const Eigen::MatrixXcd& m);

}  // namespace tmd
