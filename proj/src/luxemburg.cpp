#include "borlicz/luxemburg.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "borlicz/errors.hpp"

namespace borlicz {

namespace {

constexpr double kSat = 1e280; // saturation keeps sums finite during bracketing

// Frozen evaluation grid: |f| values with their integration weights, plus a
// coarser subset for the quadrature error estimate.
struct FrozenIntegrand {
    std::vector<double> vals, w;
    std::vector<double> vals_coarse, w_coarse;
    bool quadrature = false;
    bool exact = false;
    long n = 0;
};

FrozenIntegrand freeze(const std::function<double(const BallPoint&)>& abs_f, const Measure& mu,
                       const IntegrationOptions& opt) {
    FrozenIntegrand fz;
    const bool quad = opt.mode == IntegrationMode::Quadrature1D ||
                      (opt.mode == IntegrationMode::Auto &&
                       mu.kind() == Measure::Kind::WeightedVolume && mu.dim() == 1);
    if (quad) {
        if (mu.kind() != Measure::Kind::WeightedVolume || mu.dim() != 1)
            throw std::invalid_argument("quadrature mode needs the weighted volume on the disk");
        fz.quadrature = true;
        const double ca = c_alpha(1, mu.alpha());
        auto fill = [&](std::vector<double>& vals, std::vector<double>& w, int nr, int na) {
            // Radial rule in s = r^2 with the weight absorbed.
            const auto& rule = [&] {
                struct Node {
                    std::vector<double> x, wt;
                };
                Node node;
                // reuse the library rule through integrate(): cheaper to
                // recompute nodes locally via the same Newton scheme
                node.x.resize(static_cast<size_t>(nr));
                node.wt.resize(static_cast<size_t>(nr));
                for (int i = 0; i < nr; ++i) {
                    double t = std::cos(3.141592653589793 * (i + 0.75) / (nr + 0.5));
                    double dp = 0.0;
                    for (int it = 0; it < 100; ++it) {
                        double p0 = 1.0, p1 = t;
                        for (int k = 2; k <= nr; ++k) {
                            const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                            p0 = p1;
                            p1 = p2;
                        }
                        dp = nr * (t * p1 - p0) / (t * t - 1.0);
                        const double dt = p1 / dp;
                        t -= dt;
                        if (std::abs(dt) < 1e-15) break;
                    }
                    node.x[static_cast<size_t>(i)] = 0.5 * (1.0 + t);
                    node.wt[static_cast<size_t>(i)] = 1.0 / ((1.0 - t * t) * dp * dp);
                }
                return node;
            }();
            vals.reserve(static_cast<size_t>(nr) * static_cast<size_t>(na));
            w.reserve(vals.capacity());
            for (int i = 0; i < nr; ++i) {
                const double s = rule.x[static_cast<size_t>(i)];
                const double r = std::sqrt(s);
                const double wr =
                    rule.wt[static_cast<size_t>(i)] * ca * std::pow(1.0 - s, mu.alpha()) / na;
                for (int k = 0; k < na; ++k) {
                    const double theta = 6.283185307179586 * (k + 0.5) / na;
                    const double v = abs_f(BallPoint(1, std::polar(r, theta)));
                    if (std::isnan(v)) throw NonFinite("integrand returned NaN");
                    vals.push_back(v);
                    w.push_back(wr);
                }
            }
        };
        fill(fz.vals, fz.w, opt.radial_nodes, opt.angular_nodes);
        fill(fz.vals_coarse, fz.w_coarse, opt.radial_nodes / 2, opt.angular_nodes / 2);
        fz.n = static_cast<long>(fz.vals.size());
        return fz;
    }
    const SampleSet s = mu.realize(opt.mc_count, opt.seed);
    fz.exact = s.exact;
    fz.n = static_cast<long>(s.size());
    fz.vals.resize(s.size());
    fz.w = s.weight;
    for (size_t i = 0; i < s.size(); ++i) {
        const double v = abs_f(s.point(i));
        if (std::isnan(v)) throw NonFinite("integrand returned NaN");
        fz.vals[i] = v;
    }
    return fz;
}

double modular(const OrliczFunction& psi, const std::vector<double>& vals,
               const std::vector<double>& w, double c) {
    double acc = 0.0;
    for (size_t i = 0; i < vals.size(); ++i) {
        if (vals[i] <= 0.0) continue;
        const double v = psi.value(vals[i] / c);
        acc += w[i] * std::min(v, kSat);
    }
    return acc;
}

} // namespace

LuxemburgResult luxemburg_norm(const std::function<double(const BallPoint&)>& abs_f,
                               const OrliczFunction& psi, const Measure& mu,
                               const LuxemburgOptions& opt) {
    const FrozenIntegrand fz = freeze(abs_f, mu, opt.integration);
    auto I = [&](double c) { return modular(psi, fz.vals, fz.w, c); };

    LuxemburgResult res;
    res.quadrature = fz.quadrature;

    const double at1 = I(1.0);
    double lo = 1.0, hi = 1.0;
    if (at1 > 1.0) {
        bool bracketed = false;
        for (int k = 0; k < opt.max_doublings; ++k) {
            hi *= 2.0;
            if (I(hi) <= 1.0) {
                bracketed = true;
                break;
            }
            lo = hi;
        }
        if (!bracketed) throw NotIntegrable("no finite Luxemburg bracket after doublings");
        lo = hi / 2.0;
    } else {
        bool crossed = false;
        for (int k = 0; k < opt.max_doublings; ++k) {
            lo /= 2.0;
            if (I(lo) >= 1.0) {
                crossed = true;
                break;
            }
            hi = lo;
        }
        if (!crossed) {
            // The modular stays below 1 for arbitrarily small C: the function
            // vanishes mu-almost everywhere and the norm is 0.
            res.norm = 0.0;
            res.c_lo = 0.0;
            res.c_hi = hi;
            res.residual = 1.0;
            return res;
        }
        hi = 2.0 * lo;
    }
    while ((hi - lo) / hi > opt.rtol) {
        const double mid = std::sqrt(lo * hi);
        if (I(mid) <= 1.0)
            hi = mid;
        else
            lo = mid;
    }
    res.norm = hi;
    res.c_lo = lo;
    res.c_hi = hi;
    res.residual = std::abs(I(hi) - 1.0);
    if (fz.quadrature) {
        const double coarse = modular(psi, fz.vals_coarse, fz.w_coarse, hi);
        res.stderr_ = std::abs(coarse - I(hi));
    } else if (!fz.exact) {
        // Sample standard error of the modular at the solution.
        double mean = 0.0, var = 0.0;
        std::vector<double> terms(fz.vals.size());
        for (size_t i = 0; i < fz.vals.size(); ++i) {
            terms[i] = fz.vals[i] > 0.0 ? std::min(psi.value(fz.vals[i] / hi), kSat) : 0.0;
            mean += fz.w[i] * terms[i];
        }
        for (size_t i = 0; i < fz.vals.size(); ++i) {
            const double d = terms[i] - mean;
            var += fz.w[i] * fz.w[i] * d * d;
        }
        res.stderr_ = std::sqrt(var);
    }
    return res;
}

LuxemburgResult luxemburg_norm(const AnalyticFunction& f, const OrliczFunction& psi,
                               const Measure& mu, const LuxemburgOptions& opt) {
    return luxemburg_norm([&](const BallPoint& z) { return f.abs_eval(z); }, psi, mu, opt);
}

std::pair<double, double> point_eval_bounds(const BallPoint& a, const OrliczFunction& psi,
                                            double alpha) {
    if (!a.in_open_ball()) throw std::invalid_argument("point must be interior");
    const double m = a.dim() + 1.0 + alpha;
    const double ratio = (1.0 + a.norm()) / (1.0 - a.norm());
    const double upper = psi.inverse(std::pow(ratio, m));
    return {upper / std::pow(4.0, m), upper};
}

double point_eval_empirical(const BallPoint& a, const OrliczFunction& psi, double alpha,
                            const LuxemburgOptions& opt) {
    const Measure v = Measure::weighted_volume(a.dim(), alpha);
    std::vector<AnalyticFunction> family = catalog_polynomials(a.dim());
    family.push_back(AnalyticFunction::berezin(a, alpha));
    double best = 0.0;
    for (const auto& f : family) {
        const auto n = luxemburg_norm(f, psi, v, opt);
        if (n.norm <= 0.0) continue;
        best = std::max(best, f.abs_eval(a) / n.norm);
    }
    return best;
}

} // namespace borlicz
