#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "borlicz/covering.hpp"
#include "borlicz/functions.hpp"
#include "borlicz/luxemburg.hpp"
#include "borlicz/measure.hpp"
#include "borlicz/orlicz.hpp"

namespace borlicz {

// Cellwise supremum of |f| over the dyadic decomposition: constant on every
// cell, evaluated through cell lookup. Supremum estimates come from seeded
// cell samples plus boundary probes; `slack` records the largest ratio of
// the two-batch to one-batch estimate over all cells, which bounds the
// sampling bias of the per-cell sup from below.
class MaximalFunction {
public:
    MaximalFunction(std::shared_ptr<const CellDecomposition> decomp,
                    std::vector<double> cell_sup, double slack, std::string f_id);

    double eval(const BallPoint& z) const; // throws OutOfDepth beyond the coronae
    double cell_value(int n, int k) const;
    const CellDecomposition& decomposition() const { return *decomp_; }
    double slack() const { return slack_; }
    const std::string& function_id() const { return f_id_; }
    const std::vector<double>& cell_values() const { return cell_sup_; }

    // Weighted volume of the super-level set {Lambda > t} from measured cell
    // volumes (exact for the decomposition's own volume estimates).
    double super_level_volume(double t) const;

private:
    std::shared_ptr<const CellDecomposition> decomp_;
    std::vector<double> cell_sup_;
    double slack_ = 1.0;
    std::string f_id_;
};

MaximalFunction maximal_function(const AnalyticFunction& f,
                                 std::shared_ptr<const CellDecomposition> decomp,
                                 int samples_per_cell, std::uint64_t seed);

// Weighted-volume mass beyond the covered coronae (printed alongside any
// truncated maximal-function norm).
double covered_tail_mass(const CellDecomposition& decomp);

// Luxemburg norm of Lambda_f over the covered region of the decomposition
// against the weighted volume (Monte Carlo; the integrand vanishes on the
// uncovered tail and the truncation mass is reported separately).
LuxemburgResult maximal_norm(const MaximalFunction& lambda, const OrliczFunction& psi,
                             const LuxemburgOptions& opt = {});

struct MaximalBoundFit {
    double bound = 0.0;         // max over the family of ||Lambda_f|| / (2 ||f||)
    double stability = 1.0;     // bound at doubled cell sampling over bound
    std::vector<double> ratios; // per-function ratios
    double tail_mass = 0.0;
};

MaximalBoundFit fit_maximal_bound(const std::vector<AnalyticFunction>& family,
                                  const OrliczFunction& psi,
                                  std::shared_ptr<const CellDecomposition> decomp,
                                  int samples_per_cell, std::uint64_t seed,
                                  const LuxemburgOptions& opt = {});

// Max over the (normalized) family of the Luxemburg norm of f restricted to
// the annulus |z| > r, under mu: a certified lower bound on the restriction
// operator norm.
double restriction_norm_estimate(const OrliczFunction& psi, double alpha, const Measure& mu,
                                 double r, const std::vector<AnalyticFunction>& family,
                                 const LuxemburgOptions& opt = {});

struct DistributionalCase {
    std::string f_id;
    std::string measure_id;
    double h = 0.0;
    double t = 0.0;
    double lhs = 0.0;     // mu(|z| > 1-h and |f| > t)
    double k2h = 0.0;     // K_{mu,alpha}(2h)
    double v_super = 0.0; // v_alpha(Lambda_f > t)
    double ratio = 0.0;   // lhs / (k2h * v_super)
};

struct DistributionalReport {
    std::vector<DistributionalCase> cases;
    double fitted_c = 0.0; // the single constant that makes every case hold
    int skipped = 0;       // cases with vanishing denominator
};

// Distributional inequality across a catalog: for each function, measure and
// (h, t), mu restricted to the boundary shell of depth h where |f| > t is
// controlled by K_{mu,alpha}(2h) times the volume of {Lambda_f > t}. The
// single fitted constant is the max observed ratio.
DistributionalReport check_distributional_inequality(
    const std::vector<AnalyticFunction>& fs, const std::vector<MaximalFunction>& lambdas,
    const std::vector<Measure>& mus, const std::vector<CarlesonProfile>& profiles,
    std::span<const double> hs, int t_count);

} // namespace borlicz
