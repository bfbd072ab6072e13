#pragma once

#include <functional>
#include <utility>

#include "borlicz/functions.hpp"
#include "borlicz/measure.hpp"
#include "borlicz/orlicz.hpp"

namespace borlicz {

struct LuxemburgResult {
    double norm = 0.0;      // C*, the safe (upper) end of the final bracket
    double residual = 0.0;  // |integral at C* - 1|
    double c_lo = 0.0;      // integral >= 1 here
    double c_hi = 0.0;      // integral <= 1 here
    double stderr_ = 0.0;   // integration error at C*
    bool quadrature = false;
};

struct LuxemburgOptions {
    double rtol = 1e-9;
    int max_doublings = 60;
    IntegrationOptions integration; // Auto: quadrature on the disk volume, else MC
};

// inf { C > 0 : integral of psi(|f|/C) d mu <= 1 } by monotone bisection with
// geometric bracket expansion. The integrand values |f| are frozen on the
// integration nodes/samples once, so the map C -> integral is exactly
// monotone during the search. Throws NotIntegrable when no finite bracket
// exists after max_doublings doublings.
LuxemburgResult luxemburg_norm(const std::function<double(const BallPoint&)>& abs_f,
                               const OrliczFunction& psi, const Measure& mu,
                               const LuxemburgOptions& opt = {});

LuxemburgResult luxemburg_norm(const AnalyticFunction& f, const OrliczFunction& psi,
                               const Measure& mu, const LuxemburgOptions& opt = {});

// Closed-form envelope of the point-evaluation functional on the weighted
// Bergman-Orlicz space: with R = ((1+|a|)/(1-|a|))^{N+1+alpha},
//   psi^{-1}(R) / 4^{N+1+alpha}  <=  ||delta_a||  <=  psi^{-1}(R).
std::pair<double, double> point_eval_bounds(const BallPoint& a, const OrliczFunction& psi,
                                            double alpha);

// Certified lower bound on ||delta_a||: the best ratio |f(a)| / ||f|| over
// the normalized kernel at a and the polynomial catalog.
double point_eval_empirical(const BallPoint& a, const OrliczFunction& psi, double alpha,
                            const LuxemburgOptions& opt = {});

} // namespace borlicz
