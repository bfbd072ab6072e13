#pragma once

#include <span>
#include <string>
#include <vector>

#include "borlicz/functions.hpp"
#include "borlicz/luxemburg.hpp"
#include "borlicz/maximal.hpp"
#include "borlicz/measure.hpp"
#include "borlicz/orlicz.hpp"
#include "borlicz/symbols.hpp"
#include "borlicz/verdict.hpp"

namespace borlicz {

// Operational proxies for O(.) and o(.) on a finite dyadic grid.
struct TrendThresholds {
    double bounded_factor = 10.0; // max/median above this refutes boundedness
    double decay_factor = 10.0;   // required drop from the largest to the smallest h
    double flat_factor = 3.0;     // resolved drop below this refutes decay
    double resolve_rel = 0.25;    // stderr/value limit for a "resolved" entry
};

std::vector<double> default_a_grid(); // 13 points, log-spaced over [1e-3, 1e3]

// Ratio tables and verdicts for the embedding of the weighted Bergman-Orlicz
// space into L^{psi2}(mu). The rho-based conditions are necessary for
// boundedness/compactness, the K-based ones sufficient; the tables are kept
// in log scale because the exponential families overflow doubles.
struct EmbeddingReport {
    std::string measure_id;
    std::string psi1_id, psi2_id;
    int N = 1;
    double alpha = 0.0;
    std::vector<double> a_grid;
    std::vector<double> h; // descending
    std::vector<std::vector<double>> log_ratio_rho; // [iA][ih], -inf at zero mass
    std::vector<std::vector<double>> log_ratio_k;
    std::vector<double> rel_stderr; // per h, relative MC error of rho
    std::vector<char> structural_zero; // per h: no sample can reach this depth

    ConditionVerdict rho_bounded;   // necessary for a bounded embedding
    ConditionVerdict k_bounded;     // sufficient for a bounded embedding
    ConditionVerdict rho_vanishing; // necessary for a compact embedding
    ConditionVerdict k_vanishing;   // sufficient for a compact embedding

    double trend_slope_rho = 0.0; // log-log slope at A = 1 over the small-h half
    double trend_slope_k = 0.0;
};

EmbeddingReport check_embedding(const CarlesonProfile& profile, const OrliczFunction& psi1,
                                const OrliczFunction& psi2,
                                std::span<const double> a_grid = {},
                                const TrendThresholds& thresholds = {});

enum class CarlesonClass { AlphaCarleson, PsiAlphaCarleson, VanishingPsiAlpha, NoneDetected };

const char* to_string(CarlesonClass c);

struct CarlesonClassification {
    bool alpha_carleson = false;
    bool psi_alpha = false;
    bool vanishing = false;
    CarlesonClass headline = CarlesonClass::NoneDetected;
    ConditionVerdict alpha_verdict, psi_alpha_verdict, vanishing_verdict;
};

// Strongest detected window-decay class of the measure. Mathematical
// entailments (bounded-window decay implies the psi-class for A <= 1, and
// vanishing implies bounded) are applied to the flags, so the reported set is
// implication-closed even near the decision thresholds.
CarlesonClassification classify_carleson(const CarlesonProfile& profile,
                                         const OrliczFunction& psi,
                                         const TrendThresholds& thresholds = {});

struct RegionSpec {
    enum class Kind { WholeBall, Annulus, Window } kind = Kind::WholeBall;
    double annulus_r = 0.0;
    WindowSpec window;

    static RegionSpec whole_ball() { return {}; }
    static RegionSpec annulus(double r);
    static RegionSpec in_window(WindowSpec w);
    bool contains(const BallPoint& z) const;
};

// Layered-integral bound: under the K-hypothesis with constants (A, eta, h_A),
// the psi2-energy of f/B over a region E is controlled by mu(E) psi2(x_A)
// plus C1 eta times the psi1-energy of the maximal function. B and x_A follow
// the explicit construction; C1 is fitted and reported.
struct EnergyBoundReport {
    double a = 0.0, eta = 0.0, h_a = 0.0;
    double b_constant = 0.0; // 6 * 4^{N+alpha} / A
    double x_a = 0.0;
    double lhs = 0.0;
    double mu_e = 0.0;
    double psi2_xa = 0.0;
    double lambda_energy = 0.0;
    double fitted_c1 = 0.0;
    double slack_at_c1_one = 0.0; // lhs over the bound evaluated with C1 = 1
    bool holds_with_fitted = true;
};

EnergyBoundReport check_energy_bound(const Measure& mu, const CarlesonProfile& profile,
                                     const OrliczFunction& psi1, const OrliczFunction& psi2,
                                     const AnalyticFunction& f, const MaximalFunction& lambda,
                                     const RegionSpec& region, double A, double eta, double h_A);

// Pull-back decay over non-isotropic balls: fitted exponent of rho(h) ~ h^s
// and the constant K = max rho(h) / h^{alpha+2}. Every holomorphic self-map
// satisfies s >= alpha + 2, so the verdict demands slope >= alpha + 2 - 0.2
// (vacuously satisfied when no mass reaches the small-h shells).
struct PullbackDecayFit {
    double slope = 0.0;
    double k_constant = 0.0;
    ConditionVerdict verdict;
    bool vacuous = false;
};

PullbackDecayFit pullback_decay_fit(const CarlesonProfile& s_ball_profile, double alpha);

struct CompositionOptions {
    int profile_samples = 100000;
    int direct_samples = 20000;
    int j_min = 1, j_max = 12;
    std::vector<double> a_grid; // empty: default grid
    TrendThresholds thresholds;
    std::uint64_t seed = 20250808;
    int direct_family = 6;
};

// Full verdict for the composition operator with a given symbol: build the
// pull-back measure, profile it, classify, decide boundedness/compactness,
// fit the window decay, and cross-validate with a direct norm-ratio check on
// a finite test family (a certified lower bound on the operator norm).
struct CompositionVerdict {
    std::string symbol_id;
    std::string psi_id;
    int N = 1;
    double alpha = 0.0;
    ConditionVerdict boundedness;
    ConditionVerdict compactness;
    CarlesonClassification classes;
    PullbackDecayFit window_decay;
    double direct_norm_ratio = 0.0;
    std::string applicability_note;
    EmbeddingReport embedding;
};

CompositionVerdict composition_report(const SymbolMap& phi, const OrliczFunction& psi,
                                      double alpha, const CompositionOptions& opt = {});

struct SurveySummary {
    std::string psi_id;
    int N = 1;
    double alpha = 0.0;
    ConditionVerdict psi_delta2, psi_delta_sq, psi_nabla0, psi_uniform_nabla0;
    ConditionVerdict psi_universal_growth; // growth condition behind universal boundedness
    std::vector<CompositionVerdict> symbols;
    bool universal_expected = false; // N = 1 always; N > 1 when the squared-growth class holds
    bool contradiction = false;      // expected universal boundedness, yet a verdict is Violated
    std::vector<std::string> violated_symbols;
    int inconclusive_count = 0;
};

SurveySummary universal_boundedness_survey(const OrliczFunction& psi, double alpha, int N,
                                           const CompositionOptions& opt = {});

} // namespace borlicz
