#include "tmd/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tmd/errors.hpp"

namespace tmd {

double wrap_phase(double x) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::remainder(x, two_pi);
    if (r <= -std::numbers::pi) r += two_pi;
    return r;
}

std::vector<double> unwrap(std::span<const double> phases) {
    std::vector<double> out(phases.begin(), phases.end());
    for (std::size_t k = 1; k < out.size(); ++k)
        out[k] = out[k - 1] + wrap_phase(phases[k] - phases[k - 1]);
    return out;
}

std::vector<double> uniform_grid(double t_end, std::size_t n) {
    if (n < 2) throw DomainError("grid needs at least two points");
    std::vector<double> g(n);
    for (std::size_t k = 0; k < n; ++k)
        g[k] = t_end * static_cast<double>(k) / static_cast<double>(n - 1);
    g.back() = t_end;
    return g;
}

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol) {
    if (a == b) return 0.0;
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    double err = 0.0;
    double l1 = 0.0;
    // A single panel sizes the problem; asking for more relative accuracy than abs_tol
    // needs only drives the recursion into rounding noise.
    GK::integrate(f, a, b, 0, 0.0, &err, &l1);
    const double rel = std::max(1e-14, 0.1 * abs_tol / std::max(l1, 1e-300));
    double v = GK::integrate(f, a, b, 25, rel, &err, &l1);
    if (!std::isfinite(v) || err > std::max(abs_tol, 1e-13 * l1))
        throw QuadratureError("quadrature did not converge on [" + std::to_string(a) + ", " +
                              std::to_string(b) + "]");
    return v;
}

cplx integrate_complex(const std::function<cplx(double)>& f, double a, double b,
                       double abs_tol) {
    double re = integrate([&](double s) { return f(s).real(); }, a, b, abs_tol);
    double im = integrate([&](double s) { return f(s).imag(); }, a, b, abs_tol);
    return {re, im};
}

double max_abs(const Eigen::MatrixXcd& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

namespace {

// Dormand-Prince tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

double error_norm(const OdeState& err, const OdeState& y0, const OdeState& y1,
                  const OdeOptions& o) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        double sc = o.atol + o.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        double r = std::abs(err[i]) / sc;
        acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(std::max<Eigen::Index>(err.size(), 1)));
}

}  // namespace

OdeResult integrate_dopri5(const OdeRhs& rhs, const OdeState& y0, std::span<const double> times,
                           const OdeOptions& opts, const StepObserver& observer) {
    OdeResult res;
    if (times.empty()) return res;
    const Eigen::Index n = y0.size();
    OdeState y = y0;
    double t = times[0];
    res.samples.push_back(y);

    OdeState k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);
    rhs(t, y, k1);

    double h = opts.h_init;
    if (h <= 0.0) {
        double span = times.back() - times[0];
        double d0 = y.cwiseAbs().maxCoeff();
        double d1 = k1.cwiseAbs().maxCoeff();
        h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h = std::min(h, std::max(std::abs(span), 1e-12));
        h = std::max(h, 1e-10);
    }

    for (std::size_t next = 1; next < times.size(); ++next) {
        const double target = times[next];
        if (target < t) throw DomainError("output times must be nondecreasing");
        while (t < target) {
            if (res.accepted + res.rejected > opts.max_steps)
                throw StepUnderflow("step budget exhausted at t=" + std::to_string(t));
            bool last = false;
            double hs = h;
            if (t + hs >= target) {
                hs = target - t;
                last = true;
            }
            if (hs < 1e-14 * std::max(1.0, std::abs(t)) && !last)
                throw StepUnderflow("step size underflow at t=" + std::to_string(t));

            ytmp = y + hs * a21 * k1;
            rhs(t + c2 * hs, ytmp, k2);
            ytmp = y + hs * (a31 * k1 + a32 * k2);
            rhs(t + c3 * hs, ytmp, k3);
            ytmp = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
            rhs(t + c4 * hs, ytmp, k4);
            ytmp = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
            rhs(t + c5 * hs, ytmp, k5);
            ytmp = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
            rhs(t + hs, ytmp, k6);
            ynew = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            rhs(t + hs, ynew, k7);
            err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

            double en = error_norm(err, y, ynew, opts);
            if (!std::isfinite(en)) en = 1e10;
            if (en <= 1.0) {
                t = last ? target : t + hs;
                y = ynew;
                k1 = k7;
                ++res.accepted;
                double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
                if (!last || fac < 1.0) h = hs * fac;
                if (observer && !observer(t, y)) {
                    res.stopped = true;
                    res.stop_time = t;
                    res.stop_state = y;
                    return res;
                }
            } else {
                ++res.rejected;
                h = hs * std::max(0.2, 0.9 * std::pow(en, -0.2));
            }
        }
        res.samples.push_back(y);
    }
    return res;
}

}  // namespace tmd
