#pragma once

#include <utility>

#include <Eigen/Dense>

#include "tmd/numerics.hpp"

namespace tmd {

// Two bosonic modes, each truncated at n_max quanta.
class FockSpace {
public:
    explicit FockSpace(int n_max);

    int n_max() const noexcept { return n_max_; }
    int dim() const noexcept { return (n_max_ + 1) * (n_max_ + 1); }
    int index(int n1, int n2) const;
    std::pair<int, int> occupations(int idx) const;
    // Total occupation n1+n2 at most n_max - margin.
    bool interior(int idx, int margin = 2) const;

    bool operator==(const FockSpace&) const = default;

private:
    int n_max_;
};

FockSpace make_space(int n_max);

enum class Mode { One = 1, Two = 2 };
enum class Su2 { JPlus, JMinus, J3, N };

struct TwoModeOperator {
    FockSpace space;
    Eigen::MatrixXcd m;

    TwoModeOperator adjoint() const { return {space, m.adjoint()}; }
};

TwoModeOperator operator*(const TwoModeOperator& a, const TwoModeOperator& b);
TwoModeOperator operator+(const TwoModeOperator& a, const TwoModeOperator& b);
TwoModeOperator operator-(const TwoModeOperator& a, const TwoModeOperator& b);
TwoModeOperator operator*(cplx s, const TwoModeOperator& a);
TwoModeOperator commutator(const TwoModeOperator& a, const TwoModeOperator& b);

struct FockState {
    FockSpace space;
    Eigen::VectorXcd amp;

    double norm() const { return amp.norm(); }
    FockState normalized() const { return {space, amp / amp.norm()}; }
};

TwoModeOperator identity(const FockSpace& s);
TwoModeOperator annihilator(const FockSpace& s, Mode mode);
TwoModeOperator creator(const FockSpace& s, Mode mode);
TwoModeOperator number(const FockSpace& s, Mode mode);
TwoModeOperator su2_generator(const FockSpace& s, Su2 which);

// exp of the operator matrix (Pade scaling and squaring).
TwoModeOperator expm(const TwoModeOperator& a);

// Per-mode Poisson mass beyond n_max, P(N > n_max) with mean |c|^2.
double displacement_tail_mass(int n_max, cplx c);

inline constexpr double kDefaultTruncationThreshold = 1e-6;

// exp(sum_s c_s a_s^dag - c_s^* a_s). Throws TruncationError if either mode's tail
// mass exceeds the threshold.
TwoModeOperator displacement_operator(const FockSpace& s, cplx c1, cplx c2,
                                      double threshold = kDefaultTruncationThreshold);

// exp[-theta (e^{-i dtheta} J+ - e^{i dtheta} J-)] with
// theta = arctan(eps sqrt(1 - eps g3) / sqrt(1 + eps g3)).
TwoModeOperator mixing_operator(const FockSpace& s, double gamma3, double theta_diff, int eps);
double mixing_angle(double gamma3, int eps);

FockState basis_state(const FockSpace& s, int n1, int n2);
FockState vacuum(const FockSpace& s);
// Analytic coherent amplitudes e^{-(|c1|^2+|c2|^2)/2} c1^n1 c2^n2 / sqrt(n1! n2!), not renormalized.
FockState coherent_state(const FockSpace& s, cplx c1, cplx c2);

FockState apply(const TwoModeOperator& op, const FockState& psi);
cplx expectation(const TwoModeOperator& op, const FockState& psi);
cplx inner(const FockState& a, const FockState& b);

// 1 on basis states with n1+n2 <= n_max - margin, 0 elsewhere.
Eigen::VectorXd interior_mask(const FockSpace& s, int margin = 2);

}  // namespace tmd
