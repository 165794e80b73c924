#include "tmd/special.hpp"

#include <cmath>
#include <numbers>

#include "tmd/errors.hpp"

namespace tmd {

namespace {

constexpr int kMaxTerms = 1000;

// Kahan summation, componentwise.
struct CompensatedSum {
    cplx sum{};
    cplx comp{};

    void add(cplx x) {
        double yr = x.real() - comp.real();
        double yi = x.imag() - comp.imag();
        double tr = sum.real() + yr;
        double ti = sum.imag() + yi;
        comp = {(tr - sum.real()) - yr, (ti - sum.imag()) - yi};
        sum = {tr, ti};
    }
};

}  // namespace

SpecialValue kummer_1f1(cplx a, cplx b, cplx z, double tol) {
    if (b.imag() == 0.0 && b.real() <= 0.0 && b.real() == std::floor(b.real()))
        throw DomainError("1F1 undefined for nonpositive integer b");
    if (std::abs(z) > kSeriesRadius)
        throw SeriesDivergence("1F1 argument |z|=" + std::to_string(std::abs(z)) +
                               " beyond the series radius policy");
    CompensatedSum s;
    cplx term = 1.0;
    s.add(term);
    const double az = std::abs(z), aa = std::abs(a), ab = std::abs(b);
    for (int n = 0; n < kMaxTerms; ++n) {
        term *= (a + double(n)) * z / ((b + double(n)) * double(n + 1));
        s.add(term);
        if (term == 0.0) return {s.sum, n + 2, 0.0};
        double m = n + 1;
        if (m > ab) {
            double ratio = (aa + m) * az / ((m - ab) * (m + 1));
            if (ratio < 1.0) {
                double bound = std::abs(term) * ratio / (1.0 - ratio);
                if (bound <= tol * std::max(1.0, std::abs(s.sum))) return {s.sum, n + 2, bound};
            }
        }
    }
    throw SeriesDivergence("1F1 series did not converge within the term budget");
}

SpecialValue fresnel_c(double x, double tol) {
    const double y = std::sqrt(std::numbers::pi / 2) * x;
    const double y2 = y * y;
    if (y2 > kSeriesRadius)
        throw SeriesDivergence("Fresnel argument " + std::to_string(x) +
                               " beyond the series radius policy");
    const double y4 = y2 * y2;
    const double pre = std::sqrt(2.0 / std::numbers::pi);
    CompensatedSum s;
    double a = y;  // (-1)^n y^{4n+1} / (2n)!
    s.add(a);
    for (int n = 0; n < kMaxTerms; ++n) {
        a *= -y4 / ((2.0 * n + 1) * (2.0 * n + 2));
        double term = a / (4.0 * n + 5);
        s.add(term);
        if (term == 0.0) return {pre * s.sum.real(), n + 2, 0.0};
        double m = n + 1;
        double ratio = y4 * (4 * m + 1) / ((2 * m + 1) * (2 * m + 2) * (4 * m + 5));
        if (ratio < 1.0) {
            double bound = pre * std::abs(term) * ratio / (1.0 - ratio);
            if (bound <= tol * std::max(1.0, pre * std::abs(s.sum.real())))
                return {pre * s.sum.real(), n + 2, bound};
        }
    }
    throw SeriesDivergence("Fresnel series did not converge within the term budget");
}

}  // namespace tmd
