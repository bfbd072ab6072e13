#include "borlicz/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>

#include "borlicz/covering.hpp"
#include "borlicz/errors.hpp"

namespace borlicz {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

// Gauss-Legendre nodes/weights on [0, 1] by Newton iteration on P_n.
struct QuadRule {
    std::vector<double> x, w;
};

const QuadRule& gauss_legendre_01(int n) {
    static std::map<int, QuadRule> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    QuadRule rule;
    rule.x.resize(static_cast<size_t>(n));
    rule.w.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        double t = std::cos(3.141592653589793 * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        rule.x[static_cast<size_t>(i)] = 0.5 * (1.0 + t);
        rule.w[static_cast<size_t>(i)] = 1.0 / ((1.0 - t * t) * dp * dp);
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

} // namespace

double c_alpha(int N, double alpha) {
    if (N < 1) throw std::invalid_argument("N >= 1 required");
    if (!(alpha > -1.0)) throw std::domain_error("alpha > -1 required");
    double c = 1.0;
    for (int j = 1; j <= N; ++j) c *= (alpha + j) / j;
    return c;
}

BallPoint SampleSet::point(size_t i) const {
    std::array<std::complex<double>, BallPoint::kMaxDim> z{};
    for (int j = 0; j < N; ++j)
        z[static_cast<size_t>(j)] = {coords[static_cast<size_t>(2 * N) * i + 2 * j],
                                     coords[static_cast<size_t>(2 * N) * i + 2 * j + 1]};
    return BallPoint(std::span<const std::complex<double>>(z.data(), static_cast<size_t>(N)));
}

BallPoint SampleSet::direction(size_t i) const {
    std::array<std::complex<double>, BallPoint::kMaxDim> z{};
    for (int j = 0; j < N; ++j)
        z[static_cast<size_t>(j)] = {dirs[static_cast<size_t>(2 * N) * i + 2 * j],
                                     dirs[static_cast<size_t>(2 * N) * i + 2 * j + 1]};
    return BallPoint(std::span<const std::complex<double>>(z.data(), static_cast<size_t>(N)));
}

SampleSet SampleSet::from_points(const std::vector<BallPoint>& pts,
                                 const std::vector<double>& weights, bool exact) {
    if (pts.empty()) throw std::invalid_argument("empty sample set");
    const int N = pts.front().dim();
    const size_t n = pts.size();
    std::vector<double> w(weights);
    if (w.empty()) w.assign(n, 1.0 / static_cast<double>(n));
    if (w.size() != n) throw std::invalid_argument("weights/points size mismatch");
    double total = std::accumulate(w.begin(), w.end(), 0.0);
    if (!(total > 0.0)) throw std::invalid_argument("weights must have positive total");
    for (auto& x : w) x /= total;

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::vector<double> depth(n);
    for (size_t i = 0; i < n; ++i) {
        if (pts[i].dim() != N) throw std::invalid_argument("mixed dimensions in sample set");
        depth[i] = 1.0 - pts[i].norm();
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return depth[a] < depth[b]; });

    SampleSet s;
    s.N = N;
    s.exact = exact;
    s.depth.resize(n);
    s.weight.resize(n);
    s.coords.resize(2 * static_cast<size_t>(N) * n);
    s.dirs.resize(2 * static_cast<size_t>(N) * n);
    for (size_t i = 0; i < n; ++i) {
        const BallPoint& p = pts[order[i]];
        s.depth[i] = depth[order[i]];
        s.weight[i] = w[order[i]];
        const bool origin = p.is_origin();
        const double inv = origin ? 0.0 : 1.0 / p.norm();
        for (int j = 0; j < N; ++j) {
            s.coords[2 * static_cast<size_t>(N) * i + 2 * j] = p.coord(j).real();
            s.coords[2 * static_cast<size_t>(N) * i + 2 * j + 1] = p.coord(j).imag();
            s.dirs[2 * static_cast<size_t>(N) * i + 2 * j] = p.coord(j).real() * inv;
            s.dirs[2 * static_cast<size_t>(N) * i + 2 * j + 1] = p.coord(j).imag() * inv;
        }
    }
    return s;
}

Measure Measure::weighted_volume(int N, double alpha) {
    c_alpha(N, alpha); // validates the domain
    Measure m;
    m.kind_ = Kind::WeightedVolume;
    m.N_ = N;
    m.alpha_ = alpha;
    m.id_ = "valpha:N=" + std::to_string(N) + ",a=" + fmt(alpha);
    return m;
}

Measure Measure::pullback(const SymbolMap& phi, double alpha, int sample_count,
                          std::uint64_t seed) {
    if (sample_count < 1) throw std::invalid_argument("sample_count >= 1 required");
    Measure m;
    m.kind_ = Kind::Pullback;
    m.N_ = phi.dim();
    m.alpha_ = alpha;
    m.id_ = "pullback:" + phi.id() + ",N=" + std::to_string(phi.dim()) + ",a=" + fmt(alpha) +
            ",n=" + std::to_string(sample_count) + ",s=" + std::to_string(seed);
    m.support_depth_bound_ = std::max(0.0, 1.0 - phi.sup_norm_bound());
    Rng rng(seed);
    std::vector<BallPoint> pts;
    pts.reserve(static_cast<size_t>(sample_count));
    for (int i = 0; i < sample_count; ++i)
        pts.push_back(phi.eval(random_ball_point(phi.dim(), alpha, rng)));
    m.samples_ = std::make_shared<SampleSet>(SampleSet::from_points(pts, {}, false));
    return m;
}

Measure Measure::empirical(const std::vector<BallPoint>& pts, std::vector<double> weights) {
    Measure m;
    m.kind_ = Kind::Empirical;
    m.N_ = pts.front().dim();
    m.alpha_ = 0.0;
    m.id_ = "empirical:n=" + std::to_string(pts.size());
    m.samples_ = std::make_shared<SampleSet>(SampleSet::from_points(pts, weights, true));
    m.support_depth_bound_ = m.samples_->support_depth();
    return m;
}

Measure Measure::from_realization(SampleSet s, std::string id, double alpha,
                                  double support_depth_bound) {
    if (s.size() == 0) throw std::invalid_argument("empty realization");
    Measure m;
    m.kind_ = s.exact ? Kind::Empirical : Kind::Pullback;
    m.N_ = s.N;
    m.alpha_ = alpha;
    m.support_depth_bound_ = support_depth_bound;
    m.id_ = std::move(id);
    m.samples_ = std::make_shared<SampleSet>(std::move(s));
    return m;
}

Measure Measure::point_mass(BallPoint z0) {
    Measure m;
    m.kind_ = Kind::PointMass;
    m.N_ = z0.dim();
    m.alpha_ = 0.0;
    m.id_ = "pointmass:r=" + fmt(z0.norm());
    m.samples_ = std::make_shared<SampleSet>(SampleSet::from_points({z0}, {}, true));
    m.support_depth_bound_ = m.samples_->support_depth();
    return m;
}

std::vector<BallPoint> Measure::sample(int count, std::uint64_t seed) const {
    if (count < 1) throw std::invalid_argument("count >= 1 required");
    std::vector<BallPoint> out;
    out.reserve(static_cast<size_t>(count));
    Rng rng(seed);
    switch (kind_) {
        case Kind::WeightedVolume:
            for (int i = 0; i < count; ++i) out.push_back(random_ball_point(N_, alpha_, rng));
            break;
        case Kind::Pullback:
        case Kind::Empirical: {
            const SampleSet& s = *samples_;
            // Bootstrap by cumulative weight.
            std::vector<double> cum(s.size());
            std::partial_sum(s.weight.begin(), s.weight.end(), cum.begin());
            for (int i = 0; i < count; ++i) {
                const double u = rng.uniform01();
                const size_t j = static_cast<size_t>(
                    std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
                out.push_back(s.point(std::min(j, s.size() - 1)));
            }
            break;
        }
        case Kind::PointMass:
            for (int i = 0; i < count; ++i) out.push_back(samples_->point(0));
            break;
    }
    return out;
}

SampleSet Measure::realize(int count, std::uint64_t seed) const {
    if (samples_) return *samples_;
    std::vector<BallPoint> pts;
    pts.reserve(static_cast<size_t>(count));
    Rng rng(seed);
    for (int i = 0; i < count; ++i) pts.push_back(random_ball_point(N_, alpha_, rng));
    return SampleSet::from_points(pts, {}, false);
}

IntegralEstimate integrate_samples(const SampleSet& s,
                                   const std::function<double(const BallPoint&)>& f) {
    double mean = 0.0;
    std::vector<double> vals(s.size());
    for (size_t i = 0; i < s.size(); ++i) {
        const double v = f(s.point(i));
        if (std::isnan(v)) throw NonFinite("integrand returned NaN");
        vals[i] = v;
        mean += s.weight[i] * v;
    }
    IntegralEstimate est;
    est.value = mean;
    est.n = static_cast<long>(s.size());
    if (!s.exact && std::isfinite(mean)) {
        double var = 0.0;
        for (size_t i = 0; i < s.size(); ++i) {
            const double d = vals[i] - mean;
            var += s.weight[i] * s.weight[i] * d * d;
        }
        est.stderr_ = std::sqrt(var);
    }
    return est;
}

namespace {

IntegralEstimate quadrature_disk(double alpha, const std::function<double(const BallPoint&)>& f,
                                 int radial, int angular) {
    const double ca = c_alpha(1, alpha);
    auto pass = [&](int nr, int na) {
        const QuadRule& rule = gauss_legendre_01(nr);
        double total = 0.0;
        for (int i = 0; i < nr; ++i) {
            const double s = rule.x[static_cast<size_t>(i)];
            const double r = std::sqrt(s);
            double ring = 0.0;
            for (int k = 0; k < na; ++k) {
                const double theta = kTwoPi * (k + 0.5) / na;
                const double v = f(BallPoint(1, std::polar(r, theta)));
                if (std::isnan(v)) throw NonFinite("integrand returned NaN at quadrature node");
                ring += v;
            }
            total += rule.w[static_cast<size_t>(i)] * ca * std::pow(1.0 - s, alpha) * ring / na;
        }
        return total;
    };
    IntegralEstimate est;
    const double coarse = pass(radial, angular);
    const double fine = pass(2 * radial, 2 * angular);
    est.value = fine;
    est.stderr_ = std::abs(fine - coarse);
    est.n = static_cast<long>(2 * radial) * (2 * angular);
    return est;
}

} // namespace

IntegralEstimate integrate(const Measure& mu, const std::function<double(const BallPoint&)>& f,
                           const IntegrationOptions& opt) {
    const bool want_quad = opt.mode == IntegrationMode::Quadrature1D ||
                           (opt.mode == IntegrationMode::Auto &&
                            mu.kind() == Measure::Kind::WeightedVolume && mu.dim() == 1);
    if (want_quad) {
        if (mu.kind() != Measure::Kind::WeightedVolume || mu.dim() != 1)
            throw std::invalid_argument("quadrature mode needs the weighted volume on the disk");
        return quadrature_disk(mu.alpha(), f, opt.radial_nodes, opt.angular_nodes);
    }
    return integrate_samples(mu.realize(opt.mc_count, opt.seed), f);
}

IntegralEstimate window_mass(const Measure& mu, const WindowSpec& spec,
                             const IntegrationOptions& opt) {
    IntegrationOptions o = opt;
    if (o.mode == IntegrationMode::Auto) o.mode = IntegrationMode::MonteCarlo;
    auto est = integrate(
        mu, [&](const BallPoint& z) { return contains(spec, z) ? 1.0 : 0.0; }, o);
    if (est.stderr_ == 0.0 && mu.kind() != Measure::Kind::Empirical &&
        mu.kind() != Measure::Kind::PointMass && est.n > 0) {
        est.stderr_ = std::sqrt(std::max(est.value * (1.0 - est.value), 0.0) /
                                static_cast<double>(est.n));
    }
    return est;
}

std::vector<double> dyadic_h_grid(int j_min, int j_max) {
    if (j_min < 0 || j_max < j_min) throw std::invalid_argument("bad dyadic range");
    std::vector<double> h;
    for (int j = j_min; j <= j_max; ++j) h.push_back(std::ldexp(1.0, -j));
    return h;
}

CarlesonProfile carleson_profile(const Measure& mu, double alpha, std::vector<double> h_grid,
                                 std::uint64_t seed, const ProfileOptions& opt) {
    if (h_grid.empty()) throw std::invalid_argument("empty h grid");
    for (size_t j = 1; j < h_grid.size(); ++j)
        if (!(h_grid[j] < h_grid[j - 1]))
            throw std::invalid_argument("h grid must be strictly descending");

    const int N = mu.dim();
    const SampleSet samples = mu.realize(opt.mc_count, seed);
    const size_t n = samples.size();

    CarlesonProfile prof;
    prof.measure_id = mu.id();
    prof.N = N;
    prof.alpha = alpha;
    prof.s_balls = opt.s_balls;
    prof.h = std::move(h_grid);
    prof.n_samples = static_cast<long>(n);
    prof.support_depth = mu.support_depth_bound();
    prof.exact = samples.exact;

    // Direction grid: seeded uniform candidates plus the directions of the
    // samples nearest the boundary, which catch concentrated measures.
    const int base = opt.xi_grid_size > 0 ? opt.xi_grid_size : (N == 1 ? 64 : 1024);
    std::vector<BallPoint> xis;
    xis.reserve(static_cast<size_t>(base) + static_cast<size_t>(opt.boundary_directions));
    Rng xi_rng = Rng(seed).substream(21);
    for (int i = 0; i < base; ++i) xis.push_back(random_sphere_point(N, xi_rng));
    int added = 0;
    for (size_t i = 0; i < n && added < opt.boundary_directions; ++i) {
        if (samples.depth[i] >= 1.0) continue; // origin has no direction
        xis.push_back(samples.direction(i));
        ++added;
    }
    prof.xi_grid_size = static_cast<int>(xis.size());

    const size_t j_count = prof.h.size();
    const double h_max = prof.h.front();
    std::vector<double> best(j_count, 0.0);
    std::vector<double> delta(j_count, 0.0), counts(j_count, 0.0);

    const size_t stride = 2 * static_cast<size_t>(N);
    const double* pts = opt.s_balls ? samples.coords.data() : samples.dirs.data();
    for (const auto& xi : xis) {
        double xr[3] = {0, 0, 0}, xim[3] = {0, 0, 0};
        for (int j = 0; j < N; ++j) {
            xr[j] = xi.coord(j).real();
            xim[j] = xi.coord(j).imag();
        }
        std::fill(delta.begin(), delta.end(), 0.0);
        for (size_t i = 0; i < n; ++i) {
            const double depth = samples.depth[i];
            if (depth >= h_max) break;
            const double* p = pts + stride * i;
            double re = 0.0, im = 0.0;
            for (int j = 0; j < N; ++j) {
                const double ur = p[2 * j], ui = p[2 * j + 1];
                re += ur * xr[j] + ui * xim[j];
                im += ui * xr[j] - ur * xim[j];
            }
            const double dsq = std::sqrt((1.0 - re) * (1.0 - re) + im * im);
            const double thr = opt.s_balls ? dsq : std::max(depth, dsq);
            if (thr >= h_max) continue;
            // First index with h <= thr; the sample lies in windows above it.
            const size_t cut = static_cast<size_t>(
                std::lower_bound(prof.h.begin(), prof.h.end(), thr, std::greater<double>()) -
                prof.h.begin());
            if (cut > 0) delta[cut - 1] += samples.weight[i];
        }
        double running = 0.0;
        for (size_t j = j_count; j-- > 0;) {
            running += delta[j];
            counts[j] = running;
        }
        for (size_t j = 0; j < j_count; ++j) best[j] = std::max(best[j], counts[j]);
    }

    prof.rho = best;
    prof.rho_stderr.resize(j_count, 0.0);
    if (!samples.exact) {
        for (size_t j = 0; j < j_count; ++j)
            prof.rho_stderr[j] =
                std::sqrt(std::max(prof.rho[j] * (1.0 - prof.rho[j]), 0.0) /
                          static_cast<double>(n));
    }

    prof.k.resize(j_count);
    const double m = prof.exponent();
    double run = 0.0;
    for (size_t j = j_count; j-- > 0;) {
        run = std::max(run, prof.rho[j] / std::pow(prof.h[j], m));
        prof.k[j] = run;
    }
    return prof;
}

void save_sample_set(const SampleSet& s, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    const char magic[4] = {'B', 'L', 'X', 'S'};
    os.write(magic, 4);
    const std::uint32_t version = 1;
    const std::uint32_t n_dim = static_cast<std::uint32_t>(s.N);
    const std::uint8_t exact = s.exact ? 1 : 0;
    const std::uint64_t n = s.size();
    os.write(reinterpret_cast<const char*>(&version), sizeof version);
    os.write(reinterpret_cast<const char*>(&n_dim), sizeof n_dim);
    os.write(reinterpret_cast<const char*>(&exact), sizeof exact);
    os.write(reinterpret_cast<const char*>(&n), sizeof n);
    auto dump = [&](const std::vector<double>& v) {
        os.write(reinterpret_cast<const char*>(v.data()),
                 static_cast<std::streamsize>(v.size() * sizeof(double)));
    };
    dump(s.depth);
    dump(s.coords);
    dump(s.dirs);
    dump(s.weight);
}

std::optional<SampleSet> load_sample_set(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) return std::nullopt;
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "BLXS", 4) != 0) return std::nullopt;
    std::uint32_t version = 0, n_dim = 0;
    std::uint8_t exact = 0;
    std::uint64_t n = 0;
    is.read(reinterpret_cast<char*>(&version), sizeof version);
    is.read(reinterpret_cast<char*>(&n_dim), sizeof n_dim);
    is.read(reinterpret_cast<char*>(&exact), sizeof exact);
    is.read(reinterpret_cast<char*>(&n), sizeof n);
    if (!is || version != 1 || n_dim < 1 || n_dim > 3 || n == 0) return std::nullopt;
    SampleSet s;
    s.N = static_cast<int>(n_dim);
    s.exact = exact != 0;
    auto slurp = [&](std::vector<double>& v, size_t count) {
        v.resize(count);
        is.read(reinterpret_cast<char*>(v.data()),
                static_cast<std::streamsize>(count * sizeof(double)));
    };
    slurp(s.depth, n);
    slurp(s.coords, 2 * n_dim * n);
    slurp(s.dirs, 2 * n_dim * n);
    slurp(s.weight, n);
    if (!is) return std::nullopt;
    return s;
}

} // namespace borlicz
