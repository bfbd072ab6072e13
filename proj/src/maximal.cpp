#include "borlicz/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "borlicz/errors.hpp"

namespace borlicz {

MaximalFunction::MaximalFunction(std::shared_ptr<const CellDecomposition> decomp,
                                 std::vector<double> cell_sup, double slack, std::string f_id)
    : decomp_(std::move(decomp)), cell_sup_(std::move(cell_sup)), slack_(slack),
      f_id_(std::move(f_id)) {
    if (!decomp_ || static_cast<int>(cell_sup_.size()) != decomp_->total_cells())
        throw std::invalid_argument("cell sup table does not match the decomposition");
}

double MaximalFunction::eval(const BallPoint& z) const {
    const auto [n, k] = decomp_->cell_of(z);
    return cell_sup_[static_cast<size_t>(decomp_->flat_index(n, k))];
}

double MaximalFunction::cell_value(int n, int k) const {
    return cell_sup_[static_cast<size_t>(decomp_->flat_index(n, k))];
}

double MaximalFunction::super_level_volume(double t) const {
    double v = 0.0;
    const auto& cells = decomp_->cells();
    for (size_t i = 0; i < cells.size(); ++i)
        if (cell_sup_[i] > t) v += cells[i].measured_volume;
    return v;
}

MaximalFunction maximal_function(const AnalyticFunction& f,
                                 std::shared_ptr<const CellDecomposition> decomp,
                                 int samples_per_cell, std::uint64_t seed) {
    if (samples_per_cell < 4) throw std::invalid_argument("samples_per_cell too small");
    const CellDecomposition& d = *decomp;
    std::vector<double> sup(static_cast<size_t>(d.total_cells()), 0.0);
    double slack = 1.0;
    Rng rng(seed);
    for (int n = 0; n <= d.max_level(); ++n) {
        for (int k = 0; k < d.cells_at(n); ++k) {
            Rng cell_rng = rng.substream(
                (static_cast<std::uint64_t>(n) << 32) ^ static_cast<std::uint64_t>(k));
            double s1 = 0.0;
            for (const auto& z : d.sample_cell(n, k, samples_per_cell, cell_rng))
                s1 = std::max(s1, f.abs_eval(z));
            double s2 = s1;
            for (const auto& z : d.sample_cell(n, k, samples_per_cell, cell_rng))
                s2 = std::max(s2, f.abs_eval(z));
            sup[static_cast<size_t>(d.flat_index(n, k))] = s2;
            if (s1 > 0.0) slack = std::max(slack, s2 / s1);
        }
    }
    return MaximalFunction(std::move(decomp), std::move(sup), slack, f.name());
}

double covered_tail_mass(const CellDecomposition& decomp) {
    // P(|z| > R) under the weighted volume, by integrating the radial density
    // (1-s)^alpha s^{N-1} over s > R^2.
    const double r2 = decomp.covered_radius() * decomp.covered_radius();
    const int grid = 200000;
    const int N = decomp.dim();
    const double alpha = decomp.alpha();
    double tail = 0.0, total = 0.0, prev = 0.0;
    for (int i = 0; i <= grid; ++i) {
        const double s = static_cast<double>(i) / grid;
        const double dens = std::pow(1.0 - s, alpha) * std::pow(s, N - 1.0);
        if (i > 0) {
            const double seg = 0.5 * (dens + prev) / grid;
            total += seg;
            if (s > r2) tail += seg;
        }
        prev = dens;
    }
    return tail / total;
}

LuxemburgResult maximal_norm(const MaximalFunction& lambda, const OrliczFunction& psi,
                             const LuxemburgOptions& opt) {
    const CellDecomposition& d = lambda.decomposition();
    const Measure v = Measure::weighted_volume(d.dim(), d.alpha());
    const double covered = d.covered_radius();
    LuxemburgOptions o = opt;
    o.integration.mode = IntegrationMode::MonteCarlo;
    return luxemburg_norm(
        [&](const BallPoint& z) { return z.norm() < covered ? lambda.eval(z) : 0.0; }, psi, v,
        o);
}

MaximalBoundFit fit_maximal_bound(const std::vector<AnalyticFunction>& family,
                                  const OrliczFunction& psi,
                                  std::shared_ptr<const CellDecomposition> decomp,
                                  int samples_per_cell, std::uint64_t seed,
                                  const LuxemburgOptions& opt) {
    const Measure v = Measure::weighted_volume(decomp->dim(), decomp->alpha());
    MaximalBoundFit fit;
    fit.tail_mass = covered_tail_mass(*decomp);
    double bound2 = 0.0;
    for (const auto& f : family) {
        const auto nf = luxemburg_norm(f, psi, v, opt);
        if (nf.norm <= 0.0) continue;
        const auto lam = maximal_function(f, decomp, samples_per_cell, seed);
        const auto lam2 = maximal_function(f, decomp, 2 * samples_per_cell, seed);
        const double nl = maximal_norm(lam, psi, opt).norm;
        const double nl2 = maximal_norm(lam2, psi, opt).norm;
        fit.ratios.push_back(nl / (2.0 * nf.norm));
        fit.bound = std::max(fit.bound, fit.ratios.back());
        bound2 = std::max(bound2, nl2 / (2.0 * nf.norm));
    }
    fit.stability = fit.bound > 0.0 ? bound2 / fit.bound : 1.0;
    return fit;
}

double restriction_norm_estimate(const OrliczFunction& psi, double alpha, const Measure& mu,
                                 double r, const std::vector<AnalyticFunction>& family,
                                 const LuxemburgOptions& opt) {
    if (!(r >= 0.0) || r >= 1.0) throw std::invalid_argument("restriction radius in [0, 1)");
    const Measure v = Measure::weighted_volume(mu.dim(), alpha);
    double best = 0.0;
    for (const auto& f : family) {
        const auto nf = luxemburg_norm(f, psi, v, opt);
        if (nf.norm <= 0.0) continue;
        const double scale = 1.0 / nf.norm;
        LuxemburgOptions o = opt;
        o.integration.mode = IntegrationMode::MonteCarlo;
        const auto rest = luxemburg_norm(
            [&](const BallPoint& z) { return z.norm() > r ? scale * f.abs_eval(z) : 0.0; }, psi,
            mu, o);
        best = std::max(best, rest.norm);
    }
    return best;
}

DistributionalReport check_distributional_inequality(
    const std::vector<AnalyticFunction>& fs, const std::vector<MaximalFunction>& lambdas,
    const std::vector<Measure>& mus, const std::vector<CarlesonProfile>& profiles,
    std::span<const double> hs, int t_count) {
    if (fs.size() != lambdas.size() || mus.size() != profiles.size())
        throw std::invalid_argument("catalog size mismatch");
    DistributionalReport rep;
    for (size_t fi = 0; fi < fs.size(); ++fi) {
        const auto& f = fs[fi];
        const auto& lam = lambdas[fi];
        // Positive per-cell sups give the t grid as interior quantiles.
        std::vector<double> sups;
        for (double s : lam.cell_values())
            if (s > 0.0) sups.push_back(s);
        if (sups.empty()) continue;
        std::sort(sups.begin(), sups.end());
        std::vector<double> ts;
        for (int q = 1; q <= t_count; ++q) {
            const size_t idx = static_cast<size_t>(
                std::min<double>(sups.size() - 1.0,
                                 static_cast<double>(q) * sups.size() / (t_count + 1.0)));
            ts.push_back(0.9 * sups[idx]);
        }
        for (size_t mi = 0; mi < mus.size(); ++mi) {
            const SampleSet samples = mus[mi].realize(100000, 17);
            const auto& prof = profiles[mi];
            for (double h : hs) {
                // K at 2h from the profile grid.
                double k2h = -1.0;
                for (size_t j = 0; j < prof.h.size(); ++j)
                    if (std::abs(prof.h[j] - 2.0 * h) < 1e-12 * h) k2h = prof.k[j];
                if (k2h < 0.0)
                    throw std::invalid_argument("profile grid lacks 2h for requested h");
                for (double t : ts) {
                    double lhs = 0.0;
                    for (size_t i = 0; i < samples.size(); ++i) {
                        if (samples.depth[i] >= h) break; // sorted by depth
                        if (f.abs_eval(samples.point(i)) > t) lhs += samples.weight[i];
                    }
                    DistributionalCase c;
                    c.f_id = f.name();
                    c.measure_id = mus[mi].id();
                    c.h = h;
                    c.t = t;
                    c.lhs = lhs;
                    c.k2h = k2h;
                    c.v_super = lam.super_level_volume(t);
                    if (c.k2h * c.v_super > 0.0) {
                        c.ratio = c.lhs / (c.k2h * c.v_super);
                        rep.fitted_c = std::max(rep.fitted_c, c.ratio);
                    } else if (c.lhs > 0.0) {
                        ++rep.skipped;
                        c.ratio = -1.0;
                    }
                    rep.cases.push_back(c);
                }
            }
        }
    }
    return rep;
}

} // namespace borlicz
