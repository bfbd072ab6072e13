#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "borlicz/complex_ball.hpp"
#include "borlicz/rng.hpp"

namespace borlicz {

// Spatial hash over the real coordinates of sphere points. Bucket size is
// sqrt(2 r): two points with d(u,v)^2 < r are Euclidean-closer than one
// bucket, so separation and membership queries only visit neighbor buckets.
class SphereHash {
public:
    SphereHash(int dims, double cell_size);
    void insert(const BallPoint& p, int id);
    // Visit ids in buckets within `radius_cells` of p. The callback returns
    // true to stop early; own-bucket offsets are visited first so conflict
    // scans terminate fast.
    template <typename F>
    bool visit_neighbors(const BallPoint& p, int radius_cells, F&& f) const {
        std::array<int, 6> idx{};
        indices_of(p, idx);
        return visit_rec(idx, 0, radius_cells, std::forward<F>(f));
    }
    size_t size() const { return count_; }

private:
    void indices_of(const BallPoint& p, std::array<int, 6>& idx) const;
    template <typename F>
    bool visit_rec(std::array<int, 6>& idx, int d, int radius, F&& f) const {
        if (d == dims_) {
            const auto it = buckets_.find(key_of(idx));
            if (it != buckets_.end())
                for (int id : it->second)
                    if (f(id)) return true;
            return false;
        }
        const int base = idx[static_cast<size_t>(d)];
        for (int off = 0; off <= 2 * radius; ++off) {
            // 0, -1, +1, -2, +2, ...
            const int delta = (off % 2 == 1) ? -(off + 1) / 2 : off / 2;
            idx[static_cast<size_t>(d)] = base + delta;
            if (visit_rec(idx, d + 1, radius, std::forward<F>(f))) {
                idx[static_cast<size_t>(d)] = base;
                return true;
            }
        }
        idx[static_cast<size_t>(d)] = base;
        return false;
    }
    std::uint64_t key_of(const std::array<int, 6>& idx) const;

    int dims_;
    double cell_;
    size_t count_ = 0;
    std::unordered_map<std::uint64_t, std::vector<int>> buckets_;
};

struct CoveringOptions {
    int verify_cloud = 10000;   // base cloud size for the coverage rounds
    int overlap_cloud = 10000;  // sphere points for the overlap measurement
    double rejection_factor = 30.0; // stop after this * accepted consecutive rejections
    int max_repair_rounds = 60;
};

// Boundary caps Q(xi_k, r) built greedily: candidates stream from a seeded
// generator and are accepted when d(candidate, xi_j)^2 >= r for all accepted
// centers, which makes the caps Q(xi_k, r/4) pairwise disjoint by the
// triangle inequality. Maximality is heuristic (rejection-run stopping rule),
// so coverage is verified on a seeded test cloud afterwards.
class SphereCovering {
public:
    int dim() const { return N_; }
    double radius() const { return r_; }
    std::uint64_t seed() const { return seed_; }
    const std::vector<BallPoint>& centers() const { return centers_; }
    // Robust overlap statistic: the top-percentile 4r-cap count over the
    // probes (centers plus one standard probe cloud shared by every build).
    // Stable across seeds, unlike the strict maximum.
    int measured_overlap() const { return measured_overlap_; }
    // Strict maximum over the same probes.
    int measured_overlap_max() const { return measured_overlap_max_; }

    // Smallest k with d(dir, xi_k)^2 < r, or -1 when no cap contains dir.
    int cap_index_of(const BallPoint& unit_dir) const;
    // Existence-only membership query with early exit.
    bool covered(const BallPoint& unit_dir) const;
    // All k with d(dir, xi_k)^2 < radius_factor * r.
    std::vector<int> caps_containing(const BallPoint& unit_dir, double radius_factor = 1.0) const;
    int nearest_center(const BallPoint& unit_dir) const;
    // Exact pairwise check of the separation d^2 >= r between centers.
    bool verify_separation() const;
    // Misses of the seeded cloud against the caps Q(xi_k, r); recomputes from
    // scratch, so re-running the certification stream is an honest check.
    int verify_coverage(std::uint64_t substream_id, int cloud_size) const;
    // Stream id and size of the fresh cloud that certified coverage at build
    // time (no point of it needed repair).
    std::uint64_t certification_stream() const { return cert_stream_; }
    int certification_points() const { return cert_points_; }

    friend SphereCovering build_covering(int N, double r, std::uint64_t seed,
                                         const CoveringOptions& opt);

private:
    int N_ = 0;
    double r_ = 0.0;
    std::uint64_t seed_ = 0;
    std::vector<BallPoint> centers_;
    SphereHash hash_{2, 1.0};
    int measured_overlap_ = 0;
    int measured_overlap_max_ = 0;
    std::uint64_t cert_stream_ = 0;
    int cert_points_ = 0;
};

SphereCovering build_covering(int N, double r, std::uint64_t seed,
                              const CoveringOptions& opt = {});

// Low-discrepancy stream on the sphere: Kronecker additive recurrence mapped
// through the torus-times-simplex parametrization, which is area preserving.
// Candidate streams for the covering construction use this; it packs far more
// evenly than independent draws, so the jammed configuration (and with it the
// measured overlap constant) barely varies with the seed.
class QuasiSphereStream {
public:
    QuasiSphereStream(int N, std::uint64_t seed);
    BallPoint next();

private:
    double coord(int i) const;
    int N_;
    long k_ = 0;
    double offset_[5] = {};
    double alpha_[5] = {};
};

BallPoint random_sphere_point(int N, Rng& rng);
BallPoint random_ball_point(int N, double alpha, Rng& rng); // law of the weighted volume

struct CellInfo {
    int level = 0;
    int index = 0;
    double r_lo = 0.0, r_hi = 0.0;       // corona radii
    double measured_volume = 0.0;        // weighted-volume mass of the cell
    double measured_window_volume = 0.0; // mass of the enclosing window
    long sample_hits = 0;
};

struct CellOptions {
    CoveringOptions covering;
    int volume_samples = 200000;
    int overlap_cloud = 20000;
};

// Dyadic decomposition of the ball: corona n is { 1 - 2^-n <= |z| < 1 - 2^-(n+1) },
// split angularly by the level-n covering at r = 2^-n. Directions are assigned
// to the smallest cap index containing them, so same-level cells are disjoint
// and partition their corona; the origin belongs to cell (0, 0).
class CellDecomposition {
public:
    int dim() const { return N_; }
    double alpha() const { return alpha_; }
    int max_level() const { return n_max_; }
    double epsilon() const { return epsilon_; }
    std::uint64_t seed() const { return seed_; }

    const SphereCovering& level(int n) const { return levels_[static_cast<size_t>(n)]; }
    int cells_at(int n) const;
    int total_cells() const { return static_cast<int>(cells_.size()); }
    int flat_index(int n, int k) const;
    const std::vector<CellInfo>& cells() const { return cells_; }

    double covered_radius() const; // 1 - 2^-(n_max+1)
    std::pair<double, double> corona_bounds(int n) const;
    // Corona index from |z| (origin -> 0); may exceed max_level().
    int corona_of_norm(double norm) const;

    // Unique (n, k) with z in the cell; throws OutOfDepth beyond the coronae.
    std::pair<int, int> cell_of(const BallPoint& z) const;
    bool in_cell(const BallPoint& z, int n, int k) const;
    bool in_inflated_cell(const BallPoint& z, int n, int k) const;
    WindowSpec enclosing_window(int n, int k) const;

    // Random interior points of a cell plus deterministic boundary probes.
    std::vector<BallPoint> sample_cell(int n, int k, int count, Rng& rng) const;

    // Measured comparability constant: max of window volume over cell volume.
    double volume_ratio_bound() const { return volume_ratio_bound_; }
    // Measured max number of inflated cells containing one sampled point.
    int measured_inflated_overlap() const { return inflated_overlap_; }
    double inflated_volume_sum() const { return inflated_volume_sum_; }

    friend CellDecomposition build_cells(int N, double alpha, int n_max, double epsilon,
                                         std::uint64_t seed, const CellOptions& opt);

private:
    int N_ = 0;
    double alpha_ = 0.0;
    int n_max_ = 0;
    double epsilon_ = 0.25;
    std::uint64_t seed_ = 0;
    std::vector<SphereCovering> levels_;
    std::vector<CellInfo> cells_;
    std::vector<int> level_offset_;
    double volume_ratio_bound_ = 0.0;
    int inflated_overlap_ = 0;
    double inflated_volume_sum_ = 0.0;
};

CellDecomposition build_cells(int N, double alpha, int n_max, double epsilon,
                              std::uint64_t seed, const CellOptions& opt = {});

void export_cells_csv(const CellDecomposition& decomp, const std::string& path);

} // namespace borlicz
