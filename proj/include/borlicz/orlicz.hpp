#pragma once

#include <span>
#include <string>
#include <vector>

#include "borlicz/verdict.hpp"

namespace borlicz {

enum class PsiFamily { Power, PowerLog, ExpPower, ExpLogPower, Tabulated };

enum class PsiScale { Linear, Log1p };

// An Orlicz function: strictly convex, psi(0) = 0, psi(x)/x -> infinity.
// Families:
//   Power(p)           psi(x) = x^p,                         p > 1
//   PowerLog(a, p, b)  psi(x) = a x^p (1 + b log(1+x)),      a > 0, p > 1, b >= 0
//   ExpPower(a, b)     psi(x) = exp(a x^b) - 1,              a > 0, b >= 1
//   ExpLogPower(a, b)  psi(x) = exp(a log(1+x)^b) - 1,       a > 0, b >= 1
//   Tabulated          piecewise log-log linear through a strictly increasing
//                      (x, psi) table; power-law extrapolation at both ends
//
// PowerLog uses log(1+x) rather than log(x): the two agree asymptotically
// (which is all the growth classes depend on) while log(1+x) keeps the
// function nonnegative, vanishing at 0 and convex on all of [0, inf).
//
// Every family evaluates in two scales. The Log1p scale returns
// log(1 + psi(x)) through an analytic route that never overflows for
// x <= 1e300; the exponential families would leave double range near
// x ~ 700 in the Linear scale, which then returns +inf as a sentinel.
class OrliczFunction {
public:
    static OrliczFunction power(double p);
    static OrliczFunction power_log(double a, double p, double b);
    static OrliczFunction exp_power(double a, double b);
    static OrliczFunction exp_log_power(double a, double b);
    // Strictly increasing columns; at least 3 points.
    static OrliczFunction tabulated(std::vector<double> x, std::vector<double> psi);

    PsiFamily family() const { return family_; }
    const std::string& id() const { return id_; }

    // psi(x); +inf on overflow. Throws std::domain_error for x < 0.
    double value(double x) const;
    // log(1 + psi(x)).
    double log1p_value(double x) const;
    // log(psi(x)); -inf at x = 0.
    double log_value(double x) const;
    // psi'(x).
    double derivative(double x) const;
    // log(psi'(x)); computed analytically so the exponential families do not
    // overflow inside root finders.
    double log_derivative(double x) const;
    // psi^{-1}(y): analytic where the family admits it, otherwise monotone
    // bisection in log x. psi^{-1}(0) = 0.
    double inverse(double y) const;

    // Convenience dispatch used by the CLI.
    double eval(double x, PsiScale scale) const;

private:
    OrliczFunction() = default;
    void check_superlinear() const;

    PsiFamily family_ = PsiFamily::Power;
    double a_ = 0.0, b_ = 0.0, p_ = 0.0;
    std::vector<double> log_x_, log_psi_, node_slope_; // Tabulated
    std::string id_;
};

// Legendre transform sup_{x>=0} (x y - psi(x)), evaluated by solving
// psi'(x) = y with a monotone root find. Returns 0 for y <= psi'(0+).
double complementary(const OrliczFunction& psi, double y);

struct ClassifierOptions {
    std::vector<double> x0_candidates{1.0, 10.0, 100.0};
    double x_max = 1e8;
    int grid_points = 400;
    int max_c_pow2 = 16;          // ladder 1, 2, 4, ..., 2^16 for nabla0 constants
    int max_c_pow2_fast = 20;     // ladder cap for the squared-growth searches
    double violation_factor = 10.0; // ratio growth across the grid that flags violation
    double ambiguous_factor = 3.0;  // growth below violation but above this -> Inconclusive
};

// Moderate growth: psi(2x) <= K psi(x) for x >= x0. Reports the smallest
// bounding K over the grid tail together with a power-law envelope
// (p = log2 K) or a witness where the ratio keeps growing.
ConditionVerdict check_delta2(const OrliczFunction& psi, const ClassifierOptions& opt = {});

// Ratio regularity at a fixed beta > 1: psi(beta x)/psi(x) <= psi(beta C y)/psi(y)
// for all x0 <= x <= y. Searches C over the dyadic ladder.
ConditionVerdict check_nabla0(const OrliczFunction& psi, double beta,
                              const ClassifierOptions& opt = {});

// Same with a single constant C valid for every beta in the grid.
ConditionVerdict check_uniform_nabla0(const OrliczFunction& psi,
                                      std::span<const double> betas,
                                      const ClassifierOptions& opt = {});
ConditionVerdict check_uniform_nabla0(const OrliczFunction& psi,
                                      const ClassifierOptions& opt = {});

// Fast growth: psi(x)^2 <= psi(Cx) for x >= x0. Cross-checks the exponential
// lower-bound consequence psi(x) >= e^{ax} on the grid tail.
ConditionVerdict check_delta_sq(const OrliczFunction& psi, const ClassifierOptions& opt = {});

// psi(x)^{(N+1+alpha)/(alpha+2)} <= K psi(Cx) for x >= x0. Trivial for
// exponent <= 1; this is the growth condition under which every composition
// operator on the weighted Bergman-Orlicz space of the ball is bounded.
ConditionVerdict check_universal_boundedness_condition(const OrliczFunction& psi, int N,
                                                       double alpha,
                                                       const ClassifierOptions& opt = {});

std::vector<double> log_spaced_grid(double lo, double hi, int points);

} // namespace borlicz
