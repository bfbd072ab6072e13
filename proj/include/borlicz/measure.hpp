#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "borlicz/complex_ball.hpp"
#include "borlicz/rng.hpp"
#include "borlicz/symbols.hpp"

namespace borlicz {

// Normalizing constant of the weighted volume: prod_{j=1..N} (alpha + j) / j,
// which equals Gamma(N + alpha + 1) / (N! Gamma(alpha + 1)).
double c_alpha(int N, double alpha);

// Flat sample storage sorted by boundary depth 1 - |z| ascending, so window
// counting at dyadic radii touches a prefix only.
struct SampleSet {
    int N = 0;
    std::vector<double> depth;   // 1 - |z|
    std::vector<double> coords;  // 2N doubles per point
    std::vector<double> dirs;    // 2N doubles per point, z/|z| (zeros at origin)
    std::vector<double> weight;  // sums to 1
    bool exact = false;          // true when the set IS the measure (no MC error)

    size_t size() const { return depth.size(); }
    BallPoint point(size_t i) const;
    BallPoint direction(size_t i) const;
    double support_depth() const { return depth.empty() ? 1.0 : depth.front(); }

    static SampleSet from_points(const std::vector<BallPoint>& pts,
                                 const std::vector<double>& weights, bool exact);
};

struct IntegralEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    long n = 0;
};

enum class IntegrationMode { Auto, Quadrature1D, MonteCarlo };

struct IntegrationOptions {
    IntegrationMode mode = IntegrationMode::Auto;
    int mc_count = 100000;
    std::uint64_t seed = 1;
    int radial_nodes = 96;
    int angular_nodes = 160;
};

// A probability measure on the ball: the weighted volume, a Monte Carlo
// pull-back of it under a symbol, an explicit empirical measure, or a point
// mass. Sample-backed kinds carry their realization; the weighted volume
// materializes seeded sample sets on demand.
class Measure {
public:
    enum class Kind { WeightedVolume, Pullback, Empirical, PointMass };

    static Measure weighted_volume(int N, double alpha);
    static Measure pullback(const SymbolMap& phi, double alpha, int sample_count,
                            std::uint64_t seed);
    static Measure empirical(const std::vector<BallPoint>& pts,
                             std::vector<double> weights = {});
    static Measure point_mass(BallPoint z0);
    // Rehydrate a pull-back (or other Monte Carlo) realization, e.g. from the
    // binary cache; `id` should be the original construction key and
    // `support_depth_bound` the analytic depth bound of the source symbol.
    static Measure from_realization(SampleSet s, std::string id, double alpha,
                                    double support_depth_bound = 0.0);

    Kind kind() const { return kind_; }
    int dim() const { return N_; }
    double alpha() const { return alpha_; }
    const std::string& id() const { return id_; }
    // Stored realization for sample-backed kinds; nullptr for WeightedVolume.
    const SampleSet* samples() const { return samples_.get(); }
    // Analytic lower bound on 1 - |z| over the support: positive only when
    // the measure provably stays away from the sphere (contracting symbols,
    // interior atoms); 0 whenever the support may reach the boundary.
    double support_depth_bound() const { return support_depth_bound_; }

    // Sample stream: fresh weighted-volume draws, the pull-back law, bootstrap
    // of an empirical measure, or the repeated atom. Deterministic per seed.
    std::vector<BallPoint> sample(int count, std::uint64_t seed) const;
    // A sample set usable for window counting: stored realization, or a
    // seeded materialization of the weighted volume with `count` points.
    SampleSet realize(int count, std::uint64_t seed) const;

private:
    Kind kind_ = Kind::WeightedVolume;
    int N_ = 1;
    double alpha_ = 0.0;
    double support_depth_bound_ = 0.0;
    std::string id_;
    std::shared_ptr<const SampleSet> samples_;
};

// Integral of a real evaluable against the measure. Quadrature is available
// for the weighted volume on the disk (tensor Gauss-Legendre in r^2 with the
// weight absorbed, uniform angular grid); everything else is Monte Carlo over
// the measure's samples. Throws NonFinite if the integrand returns NaN.
IntegralEstimate integrate(const Measure& mu, const std::function<double(const BallPoint&)>& f,
                           const IntegrationOptions& opt = {});

// Same contract, but over an explicit sample set.
IntegralEstimate integrate_samples(const SampleSet& s,
                                   const std::function<double(const BallPoint&)>& f);

IntegralEstimate window_mass(const Measure& mu, const WindowSpec& spec,
                             const IntegrationOptions& opt = {});

struct CarlesonProfile {
    std::string measure_id;
    int N = 1;
    double alpha = 0.0;
    bool s_balls = false; // profile over S(xi, h) instead of W(xi, h)
    std::vector<double> h;     // dyadic, descending
    std::vector<double> rho;   // sup over the direction grid of window mass
    std::vector<double> rho_stderr;
    std::vector<double> k;     // running sup of rho(t)/t^{N+1+alpha}, t <= h
    int xi_grid_size = 0;
    long n_samples = 0;
    // Analytic depth bound of the measure's support (see Measure); zeros of
    // rho at h below this are structural, not a sampling artifact.
    double support_depth = 0.0;
    bool exact = false;

    double exponent() const { return N + 1.0 + alpha; }
};

struct ProfileOptions {
    int xi_grid_size = 0;      // 0: default 64 (N=1) or 1024 (N>=2)
    int boundary_directions = 256;
    int mc_count = 100000;     // weighted-volume realization size
    bool s_balls = false;
};

CarlesonProfile carleson_profile(const Measure& mu, double alpha, std::vector<double> h_grid,
                                 std::uint64_t seed, const ProfileOptions& opt = {});

std::vector<double> dyadic_h_grid(int j_min, int j_max); // 2^-j_min .. 2^-j_max descending

// Binary cache for pull-back realizations keyed by the construction inputs.
void save_sample_set(const SampleSet& s, const std::string& path);
std::optional<SampleSet> load_sample_set(const std::string& path);

} // namespace borlicz
