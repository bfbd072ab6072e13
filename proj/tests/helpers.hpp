#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "borlicz/complex_ball.hpp"
#include "borlicz/rng.hpp"

namespace borlicz::testing {

// Exact weighted volume of a Carleson window on the disk.
inline double disk_window_volume(double h, double alpha) {
    const double arc = 2.0 * std::asin(std::min(1.0, h / 2.0)) / 3.141592653589793238462643;
    return arc * std::pow(2.0 * h - h * h, alpha + 1.0);
}

// Cumulative distribution of the squared radius under the weighted volume,
// computed by direct numerical integration of (1-s)^alpha s^{N-1}.
struct RadialCdf {
    std::vector<double> s, F;

    RadialCdf(int N, double alpha, int grid = 200000) {
        s.resize(static_cast<size_t>(grid) + 1);
        F.resize(s.size());
        double acc = 0.0;
        double prev = 0.0;
        for (size_t i = 0; i < s.size(); ++i) {
            const double x = static_cast<double>(i) / grid;
            const double d = std::pow(1.0 - x, alpha) * std::pow(x, N - 1.0);
            if (i > 0) acc += 0.5 * (d + prev) / grid;
            prev = d;
            s[i] = x;
            F[i] = acc;
        }
        for (auto& v : F) v /= acc;
    }

    double operator()(double x) const {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        const size_t i = static_cast<size_t>(x * (s.size() - 1));
        const size_t j = std::min(i + 1, s.size() - 1);
        const double t = x * (s.size() - 1) - static_cast<double>(i);
        return F[i] + t * (F[j] - F[i]);
    }
};

// Kolmogorov-Smirnov distance of sorted samples against a CDF.
template <typename Cdf>
double ks_distance(std::vector<double> samples, const Cdf& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double ks = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        ks = std::max(ks, std::abs(f - static_cast<double>(i) / n));
        ks = std::max(ks, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return ks;
}

// Points of the non-isotropic ball S(xi, h) by rejection from a cap-scaled
// proposal; directions perturb xi at scale sqrt(h).
inline std::vector<BallPoint> sample_niso_ball(const BallPoint& xi, double h, int count,
                                               Rng& rng) {
    const int N = xi.dim();
    std::vector<BallPoint> out;
    out.reserve(static_cast<size_t>(count));
    const double sigma = 0.5 * std::sqrt(h);
    int guard = 0;
    while (static_cast<int>(out.size()) < count && guard < 10000 * count) {
        ++guard;
        std::array<std::complex<double>, BallPoint::kMaxDim> z{};
        double nsq = 0.0;
        for (int j = 0; j < N; ++j) {
            z[static_cast<size_t>(j)] =
                xi.coord(j) + sigma * std::complex<double>(rng.normal(), rng.normal());
            nsq += std::norm(z[static_cast<size_t>(j)]);
        }
        if (nsq < 1e-30) continue;
        const double scale = (1.0 - rng.uniform(0.0, h)) / std::sqrt(nsq);
        BallPoint p(std::span<const std::complex<double>>(z.data(), static_cast<size_t>(N)));
        p = p.scaled(scale);
        if (!p.in_open_ball()) continue;
        if (niso_distance_sq(xi, p) < h) out.push_back(p);
    }
    return out;
}

} // namespace borlicz::testing
