#include "borlicz/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace borlicz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double format_check(double v, const char* name) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be finite");
    return v;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// log(e^L - 1) from L = log(1 + psi).
double log_expm1_of(double L) {
    if (L <= 0.0) return -kInf;
    if (L > 36.0) return L; // e^{-L} below double epsilon
    return std::log(std::expm1(L));
}

// log(1 + e^G) from G = log(psi).
double log1p_exp_of(double G) {
    if (G == -kInf) return 0.0;
    if (G > 36.0) return G;
    return std::log1p(std::exp(G));
}

} // namespace

const char* to_string(ConditionStatus s) {
    switch (s) {
        case ConditionStatus::SatisfiedOnRange: return "SatisfiedOnRange";
        case ConditionStatus::ViolatedWithWitness: return "ViolatedWithWitness";
        case ConditionStatus::Inconclusive: return "Inconclusive";
    }
    return "?";
}

ConditionVerdict ConditionVerdict::make_satisfied(double lo, double hi,
                                                  std::map<std::string, double> constants,
                                                  std::string note) {
    ConditionVerdict v;
    v.status = ConditionStatus::SatisfiedOnRange;
    v.constants = std::move(constants);
    v.range_lo = lo;
    v.range_hi = hi;
    v.note = std::move(note);
    return v;
}

ConditionVerdict ConditionVerdict::make_violated(double lo, double hi, double witness_x,
                                                 std::optional<double> witness_y,
                                                 std::string note) {
    ConditionVerdict v;
    v.status = ConditionStatus::ViolatedWithWitness;
    v.witness_x = witness_x;
    v.witness_y = witness_y;
    v.range_lo = lo;
    v.range_hi = hi;
    v.note = std::move(note);
    return v;
}

ConditionVerdict ConditionVerdict::make_inconclusive(double lo, double hi, std::string note) {
    ConditionVerdict v;
    v.status = ConditionStatus::Inconclusive;
    v.range_lo = lo;
    v.range_hi = hi;
    v.note = std::move(note);
    return v;
}

std::vector<double> log_spaced_grid(double lo, double hi, int points) {
    if (!(lo > 0.0) || !(hi > lo) || points < 2)
        throw std::invalid_argument("log_spaced_grid: need 0 < lo < hi and points >= 2");
    std::vector<double> g(static_cast<size_t>(points));
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < points; ++i)
        g[static_cast<size_t>(i)] = std::exp(llo + (lhi - llo) * i / (points - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

OrliczFunction OrliczFunction::power(double p) {
    format_check(p, "p");
    if (!(p > 1.0)) throw std::invalid_argument("Power family requires p > 1");
    OrliczFunction f;
    f.family_ = PsiFamily::Power;
    f.p_ = p;
    f.id_ = "power:p=" + fmt(p);
    f.check_superlinear();
    return f;
}

OrliczFunction OrliczFunction::power_log(double a, double p, double b) {
    format_check(a, "a");
    format_check(p, "p");
    format_check(b, "b");
    if (!(a > 0.0) || !(p > 1.0) || !(b >= 0.0))
        throw std::invalid_argument("PowerLog family requires a > 0, p > 1, b >= 0");
    OrliczFunction f;
    f.family_ = PsiFamily::PowerLog;
    f.a_ = a;
    f.p_ = p;
    f.b_ = b;
    f.id_ = "powerlog:a=" + fmt(a) + ",p=" + fmt(p) + ",b=" + fmt(b);
    f.check_superlinear();
    return f;
}

OrliczFunction OrliczFunction::exp_power(double a, double b) {
    format_check(a, "a");
    format_check(b, "b");
    if (!(a > 0.0) || !(b >= 1.0))
        throw std::invalid_argument("ExpPower family requires a > 0, b >= 1");
    OrliczFunction f;
    f.family_ = PsiFamily::ExpPower;
    f.a_ = a;
    f.b_ = b;
    f.id_ = "exppower:a=" + fmt(a) + ",b=" + fmt(b);
    f.check_superlinear();
    return f;
}

OrliczFunction OrliczFunction::exp_log_power(double a, double b) {
    format_check(a, "a");
    format_check(b, "b");
    if (!(a > 0.0) || !(b >= 1.0))
        throw std::invalid_argument("ExpLogPower family requires a > 0, b >= 1");
    if (b == 1.0 && a <= 1.0)
        throw std::invalid_argument("ExpLogPower with b = 1 requires a > 1 to be superlinear");
    OrliczFunction f;
    f.family_ = PsiFamily::ExpLogPower;
    f.a_ = a;
    f.b_ = b;
    f.id_ = "explogpower:a=" + fmt(a) + ",b=" + fmt(b);
    f.check_superlinear();
    return f;
}

OrliczFunction OrliczFunction::tabulated(std::vector<double> x, std::vector<double> psi) {
    if (x.size() != psi.size() || x.size() < 3)
        throw std::invalid_argument("Tabulated family needs >= 3 matching grid points");
    OrliczFunction f;
    f.family_ = PsiFamily::Tabulated;
    f.log_x_.reserve(x.size());
    f.log_psi_.reserve(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(psi[i] > 0.0))
            throw std::invalid_argument("Tabulated columns must be positive");
        if (i > 0 && (x[i] <= x[i - 1] || psi[i] <= psi[i - 1]))
            throw std::invalid_argument("Tabulated columns must be strictly increasing");
        f.log_x_.push_back(std::log(x[i]));
        f.log_psi_.push_back(std::log(psi[i]));
    }
    // Node slopes d(log psi)/d(log x) by centered differences, one-sided at the ends.
    const size_t n = f.log_x_.size();
    f.node_slope_.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const size_t lo = (i == 0) ? 0 : i - 1;
        const size_t hi = (i + 1 == n) ? i : i + 1;
        f.node_slope_[i] = (f.log_psi_[hi] - f.log_psi_[lo]) / (f.log_x_[hi] - f.log_x_[lo]);
    }
    for (double m : f.node_slope_)
        if (!(m > 0.0)) throw std::invalid_argument("Tabulated grid must have positive log-log slope");
    f.id_ = "table:" + fmt(x.front()) + ".." + fmt(x.back()) + "#" + fmt(double(n));
    f.check_superlinear();
    return f;
}

void OrliczFunction::check_superlinear() const {
    // psi(x)/x must increase along x = 10^k, k = 2..6; in log scale this is
    // log psi(10^{k+1}) - log psi(10^k) > log 10.
    double prev = log_value(1e2) - std::log(1e2);
    for (int k = 3; k <= 6; ++k) {
        const double x = std::pow(10.0, k);
        const double cur = log_value(x) - std::log(x);
        if (!(cur > prev))
            throw std::invalid_argument("not superlinear: psi(x)/x fails to increase at x = 1e" +
                                        fmt(double(k)));
        prev = cur;
    }
}

double OrliczFunction::value(double x) const {
    if (x < 0.0) throw std::domain_error("Orlicz function evaluated at x < 0");
    if (x == 0.0) return 0.0;
    switch (family_) {
        case PsiFamily::Power: return std::pow(x, p_);
        case PsiFamily::PowerLog: return a_ * std::pow(x, p_) * (1.0 + b_ * std::log1p(x));
        case PsiFamily::ExpPower: {
            const double e = a_ * std::pow(x, b_);
            return e > 709.0 ? kInf : std::expm1(e);
        }
        case PsiFamily::ExpLogPower: {
            const double e = a_ * std::pow(std::log1p(x), b_);
            return e > 709.0 ? kInf : std::expm1(e);
        }
        case PsiFamily::Tabulated: {
            const double g = log_value(x);
            return g > 709.0 ? kInf : std::exp(g);
        }
    }
    return 0.0;
}

double OrliczFunction::log1p_value(double x) const {
    if (x < 0.0) throw std::domain_error("Orlicz function evaluated at x < 0");
    if (x == 0.0) return 0.0;
    switch (family_) {
        case PsiFamily::Power: {
            const double g = p_ * std::log(x);
            return log1p_exp_of(g);
        }
        case PsiFamily::PowerLog: {
            const double g = std::log(a_) + p_ * std::log(x) + std::log(1.0 + b_ * std::log1p(x));
            return log1p_exp_of(g);
        }
        case PsiFamily::ExpPower: return a_ * std::pow(x, b_);
        case PsiFamily::ExpLogPower: return a_ * std::pow(std::log1p(x), b_);
        case PsiFamily::Tabulated: return log1p_exp_of(log_value(x));
    }
    return 0.0;
}

double OrliczFunction::log_value(double x) const {
    if (x < 0.0) throw std::domain_error("Orlicz function evaluated at x < 0");
    if (x == 0.0) return -kInf;
    switch (family_) {
        case PsiFamily::Power: return p_ * std::log(x);
        case PsiFamily::PowerLog:
            return std::log(a_) + p_ * std::log(x) + std::log(1.0 + b_ * std::log1p(x));
        case PsiFamily::ExpPower: return log_expm1_of(a_ * std::pow(x, b_));
        case PsiFamily::ExpLogPower: return log_expm1_of(a_ * std::pow(std::log1p(x), b_));
        case PsiFamily::Tabulated: {
            const double lx = std::log(x);
            const auto& xs = log_x_;
            if (lx <= xs.front())
                return log_psi_.front() + node_slope_.front() * (lx - xs.front());
            if (lx >= xs.back())
                return log_psi_.back() + node_slope_.back() * (lx - xs.back());
            const auto it = std::upper_bound(xs.begin(), xs.end(), lx);
            const size_t i = static_cast<size_t>(it - xs.begin()) - 1;
            const double t = (lx - xs[i]) / (xs[i + 1] - xs[i]);
            return log_psi_[i] + t * (log_psi_[i + 1] - log_psi_[i]);
        }
    }
    return -kInf;
}

double OrliczFunction::derivative(double x) const {
    if (x < 0.0) throw std::domain_error("Orlicz derivative evaluated at x < 0");
    switch (family_) {
        case PsiFamily::Power: return x == 0.0 ? 0.0 : p_ * std::pow(x, p_ - 1.0);
        case PsiFamily::PowerLog:
            if (x == 0.0) return 0.0;
            return a_ * std::pow(x, p_ - 1.0) *
                   (p_ * (1.0 + b_ * std::log1p(x)) + b_ * x / (1.0 + x));
        case PsiFamily::ExpPower: {
            if (x == 0.0) return b_ == 1.0 ? a_ : 0.0;
            const double g = log_derivative(x);
            return g > 709.0 ? kInf : std::exp(g);
        }
        case PsiFamily::ExpLogPower: {
            if (x == 0.0) return b_ == 1.0 ? a_ : 0.0;
            const double g = log_derivative(x);
            return g > 709.0 ? kInf : std::exp(g);
        }
        case PsiFamily::Tabulated: {
            if (x == 0.0) return 0.0;
            const double g = log_derivative(x);
            return g > 709.0 ? kInf : std::exp(g);
        }
    }
    return 0.0;
}

double OrliczFunction::log_derivative(double x) const {
    if (!(x > 0.0)) throw std::domain_error("log_derivative needs x > 0");
    switch (family_) {
        case PsiFamily::Power: return std::log(p_) + (p_ - 1.0) * std::log(x);
        case PsiFamily::PowerLog:
            return std::log(a_) + (p_ - 1.0) * std::log(x) +
                   std::log(p_ * (1.0 + b_ * std::log1p(x)) + b_ * x / (1.0 + x));
        case PsiFamily::ExpPower:
            // psi'(x) = a b x^{b-1} e^{a x^b}
            return std::log(a_ * b_) + (b_ - 1.0) * std::log(x) + a_ * std::pow(x, b_);
        case PsiFamily::ExpLogPower: {
            // psi'(x) = e^{a u^b} a b u^{b-1} / (1+x), u = log(1+x)
            const double u = std::log1p(x);
            return a_ * std::pow(u, b_) + std::log(a_ * b_) + (b_ - 1.0) * std::log(u) -
                   std::log1p(x);
        }
        case PsiFamily::Tabulated: {
            // slope m(log x) interpolated between node slopes; psi' = m psi / x.
            const double lx = std::log(x);
            const auto& xs = log_x_;
            double m;
            if (lx <= xs.front())
                m = node_slope_.front();
            else if (lx >= xs.back())
                m = node_slope_.back();
            else {
                const auto it = std::upper_bound(xs.begin(), xs.end(), lx);
                const size_t i = static_cast<size_t>(it - xs.begin()) - 1;
                const double t = (lx - xs[i]) / (xs[i + 1] - xs[i]);
                m = node_slope_[i] + t * (node_slope_[i + 1] - node_slope_[i]);
            }
            return std::log(m) + log_value(x) - lx;
        }
    }
    return -kInf;
}

double OrliczFunction::inverse(double y) const {
    if (y < 0.0) throw std::domain_error("inverse of Orlicz function needs y >= 0");
    if (y == 0.0) return 0.0;
    switch (family_) {
        case PsiFamily::Power: return std::pow(y, 1.0 / p_);
        case PsiFamily::ExpPower: return std::pow(std::log1p(y) / a_, 1.0 / b_);
        case PsiFamily::ExpLogPower:
            return std::expm1(std::pow(std::log1p(y) / a_, 1.0 / b_));
        case PsiFamily::PowerLog:
        case PsiFamily::Tabulated: {
            // Bisection on log x against log(1 + psi) which is monotone.
            const double target = std::log1p(y);
            double llo = std::log(1e-300), lhi = std::log(1e300);
            if (log1p_value(std::exp(lhi)) < target) return kInf;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (llo + lhi);
                if (log1p_value(std::exp(mid)) < target)
                    llo = mid;
                else
                    lhi = mid;
            }
            return std::exp(0.5 * (llo + lhi));
        }
    }
    return 0.0;
}

double OrliczFunction::eval(double x, PsiScale scale) const {
    return scale == PsiScale::Linear ? value(x) : log1p_value(x);
}

double complementary(const OrliczFunction& psi, double y) {
    if (y < 0.0) throw std::domain_error("complementary function needs y >= 0");
    if (y == 0.0) return 0.0;
    const double ly = std::log(y);
    // psi' is nondecreasing; x y - psi(x) is maximized where psi'(x) = y.
    double llo = std::log(1e-300), lhi = std::log(1e300);
    if (psi.log_derivative(std::exp(llo)) >= ly) return 0.0; // y <= psi'(0+)
    if (psi.log_derivative(std::exp(lhi)) <= ly) return kInf;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (llo + lhi);
        if (psi.log_derivative(std::exp(mid)) < ly)
            llo = mid;
        else
            lhi = mid;
    }
    const double xstar = std::exp(0.5 * (llo + lhi));
    const double v = psi.value(xstar);
    if (!std::isfinite(v)) return kInf;
    return std::max(0.0, xstar * y - v);
}

namespace {

struct GridEval {
    std::vector<double> x;
    std::vector<double> log_psi; // log psi(x_i)
};

GridEval eval_grid(const OrliczFunction& psi, double x0, const ClassifierOptions& opt) {
    GridEval g;
    g.x = log_spaced_grid(x0, opt.x_max, opt.grid_points);
    g.log_psi.resize(g.x.size());
    for (size_t i = 0; i < g.x.size(); ++i) g.log_psi[i] = psi.log_value(g.x[i]);
    return g;
}

// Max of values over x in [lo, hi]; returns (max, argmax) or nullopt when empty.
std::optional<std::pair<double, double>> range_max(const std::vector<double>& x,
                                                   const std::vector<double>& v, double lo,
                                                   double hi) {
    std::optional<std::pair<double, double>> best;
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] < lo || x[i] > hi) continue;
        if (!best || v[i] > best->first) best = {v[i], x[i]};
    }
    return best;
}

} // namespace

ConditionVerdict check_delta2(const OrliczFunction& psi, const ClassifierOptions& opt) {
    std::optional<ConditionVerdict> best_satisfied;
    std::optional<ConditionVerdict> best_violated;
    bool saw_inconclusive = false;
    for (double x0 : opt.x0_candidates) {
        const GridEval g = eval_grid(psi, x0, opt);
        std::vector<double> lr(g.x.size());
        for (size_t i = 0; i < g.x.size(); ++i)
            lr[i] = psi.log_value(2.0 * g.x[i]) - g.log_psi[i];
        const auto bot = range_max(g.x, lr, x0, 10.0 * x0);
        const auto top = range_max(g.x, lr, opt.x_max / 10.0, opt.x_max);
        if (!bot || !top) continue;
        const double growth = top->first - bot->first;
        if (growth > std::log(opt.violation_factor)) {
            auto v = ConditionVerdict::make_violated(
                x0, opt.x_max, top->second, std::nullopt,
                "psi(2x)/psi(x) grows by factor " + fmt(std::exp(growth)) + " across the grid");
            if (!best_violated) best_violated = v;
        } else if (growth > std::log(opt.ambiguous_factor)) {
            saw_inconclusive = true;
        } else {
            const double lK = *std::max_element(lr.begin(), lr.end());
            if (lK < 700.0) {
                const double K = std::exp(lK);
                std::map<std::string, double> c{{"K", K}, {"x0", x0}, {"p_envelope", std::log2(K)}};
                auto v = ConditionVerdict::make_satisfied(x0, opt.x_max, std::move(c));
                if (!best_satisfied || v.constants.at("K") < best_satisfied->constants.at("K"))
                    best_satisfied = v;
            }
        }
    }
    if (best_satisfied) return *best_satisfied;
    if (saw_inconclusive)
        return ConditionVerdict::make_inconclusive(opt.x0_candidates.front(), opt.x_max,
                                                   "ratio trend between flat and violation factors");
    if (best_violated) return *best_violated;
    return ConditionVerdict::make_inconclusive(opt.x0_candidates.front(), opt.x_max, "empty grid");
}

namespace {

// Core of the ratio-regularity search at one (beta, x0): the smallest dyadic C
// such that max_{x0<=x<=y} log[psi(beta x)/psi(x)] <= log[psi(beta C y)/psi(y)]
// for every grid y. Returns the ladder exponent or -1 if none works, and the
// worst pair for witness reporting.
struct NablaSearch {
    int c_pow = -1;
    double witness_x = 0.0, witness_y = 0.0;
};

NablaSearch nabla0_search(const OrliczFunction& psi, double beta, const GridEval& g,
                          int max_c_pow2) {
    const size_t n = g.x.size();
    std::vector<double> lr(n), prefix(n), prefix_arg(n);
    for (size_t i = 0; i < n; ++i)
        lr[i] = psi.log_value(beta * g.x[i]) - g.log_psi[i];
    double run = -std::numeric_limits<double>::infinity(), run_arg = g.x.front();
    for (size_t i = 0; i < n; ++i) {
        if (lr[i] > run) {
            run = lr[i];
            run_arg = g.x[i];
        }
        prefix[i] = run;
        prefix_arg[i] = run_arg;
    }
    NablaSearch out;
    for (int cp = 0; cp <= max_c_pow2; ++cp) {
        const double C = std::ldexp(1.0, cp);
        bool ok = true;
        for (size_t i = 0; i < n; ++i) {
            const double rhs = psi.log_value(beta * C * g.x[i]) - g.log_psi[i];
            const double slack = 1e-9 * (1.0 + std::abs(rhs));
            if (prefix[i] > rhs + slack) {
                ok = false;
                if (cp == max_c_pow2) {
                    out.witness_x = prefix_arg[i];
                    out.witness_y = g.x[i];
                }
                break;
            }
        }
        if (ok) {
            out.c_pow = cp;
            return out;
        }
    }
    return out;
}

} // namespace

ConditionVerdict check_nabla0(const OrliczFunction& psi, double beta,
                              const ClassifierOptions& opt) {
    if (!(beta > 1.0)) throw std::invalid_argument("nabla0 check needs beta > 1");
    std::optional<ConditionVerdict> best;
    std::optional<NablaSearch> worst;
    bool at_cap = false;
    for (double x0 : opt.x0_candidates) {
        const GridEval g = eval_grid(psi, x0, opt);
        const NablaSearch s = nabla0_search(psi, beta, g, opt.max_c_pow2);
        if (s.c_pow < 0) {
            worst = s;
            continue;
        }
        if (s.c_pow == opt.max_c_pow2) {
            at_cap = true;
            continue;
        }
        const double C = std::ldexp(1.0, s.c_pow);
        std::map<std::string, double> c{{"C_beta", C}, {"beta", beta}, {"x0", x0}};
        auto v = ConditionVerdict::make_satisfied(x0, opt.x_max, std::move(c));
        if (!best || v.constants.at("C_beta") < best->constants.at("C_beta")) best = v;
    }
    if (best) return *best;
    if (at_cap)
        return ConditionVerdict::make_inconclusive(opt.x0_candidates.front(), opt.x_max,
                                                   "satisfied only at the ladder cap");
    if (worst)
        return ConditionVerdict::make_violated(opt.x0_candidates.front(), opt.x_max,
                                               worst->witness_x, worst->witness_y,
                                               "no dyadic C works up to the ladder cap");
    return ConditionVerdict::make_inconclusive(opt.x0_candidates.front(), opt.x_max, "empty grid");
}

ConditionVerdict check_uniform_nabla0(const OrliczFunction& psi, std::span<const double> betas,
                                      const ClassifierOptions& opt) {
    if (betas.size() < 2) throw std::invalid_argument("uniform nabla0 check needs several betas");
    std::optional<ConditionVerdict> best;
    bool at_cap = false;
    double worst_x = 0.0, worst_y = 0.0, worst_beta = 0.0;
    bool have_worst = false;
    for (double x0 : opt.x0_candidates) {
        const GridEval g = eval_grid(psi, x0, opt);
        int needed = -1;
        for (double beta : betas) {
            const NablaSearch s = nabla0_search(psi, beta, g, opt.max_c_pow2);
            if (s.c_pow < 0) {
                needed = -1;
                worst_x = s.witness_x;
                worst_y = s.witness_y;
                worst_beta = beta;
                have_worst = true;
                break;
            }
            needed = std::max(needed, s.c_pow);
        }
        if (needed < 0) continue;
        if (needed == opt.max_c_pow2) {
            at_cap = true;
            continue;
        }
        const double C = std::ldexp(1.0, needed);
        std::map<std::string, double> c{{"C", C}, {"x0", x0}};
        auto v = ConditionVerdict::make_satisfied(x0, opt.x_max, std::move(c));
        if (!best || v.constants.at("C") < best->constants.at("C")) best = v;
    }
    if (best) return *best;
    if (at_cap)
        return ConditionVerdict::make_inconclusive(opt.x0_candidates.front(), opt.x_max,
                                                   "satisfied only at the ladder cap");
    if (have_worst)
        return ConditionVerdict::make_violated(opt.x0_candidates.front(), opt.x_max, worst_x,
                                               worst_y,
                                               "fails at beta = " + fmt(worst_beta));
    return ConditionVerdict::make_inconclusive(opt.x0_candidates.front(), opt.x_max, "empty grid");
}

ConditionVerdict check_uniform_nabla0(const OrliczFunction& psi, const ClassifierOptions& opt) {
    static const double kBetas[] = {1.1, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0};
    return check_uniform_nabla0(psi, kBetas, opt);
}

ConditionVerdict check_delta_sq(const OrliczFunction& psi, const ClassifierOptions& opt) {
    std::optional<ConditionVerdict> best;
    bool at_cap = false;
    double worst_x = 0.0;
    bool have_worst = false;
    for (double x0 : opt.x0_candidates) {
        const GridEval g = eval_grid(psi, x0, opt);
        const size_t n = g.x.size();
        int found = -1;
        for (int cp = 0; cp <= opt.max_c_pow2_fast; ++cp) {
            const double C = std::ldexp(1.0, cp);
            bool ok = true;
            double worst_here = 0.0, margin = -kInf;
            for (size_t i = 0; i < n; ++i) {
                const double lhs = 2.0 * g.log_psi[i];
                const double rhs = psi.log_value(C * g.x[i]);
                const double slack = 1e-9 * (1.0 + std::abs(rhs));
                if (lhs > rhs + slack) {
                    ok = false;
                    if (lhs - rhs > margin) {
                        margin = lhs - rhs;
                        worst_here = g.x[i];
                    }
                }
            }
            if (ok) {
                found = cp;
                break;
            }
            if (cp == opt.max_c_pow2_fast) {
                worst_x = worst_here;
                have_worst = true;
            }
        }
        if (found < 0) continue;
        // Squared growth forces at least exponential growth; check the tail of
        // log psi(x)/x is not collapsing, which would contradict the search.
        const double q_start = psi.log_value(opt.x_max / 100.0) / (opt.x_max / 100.0);
        const double q_end = psi.log_value(opt.x_max) / opt.x_max;
        if (q_end < 0.5 * q_start) {
            return ConditionVerdict::make_violated(
                x0, opt.x_max, opt.x_max, std::nullopt,
                "grid search found C but exponential lower bound fails on the tail");
        }
        if (found == opt.max_c_pow2_fast) {
            at_cap = true;
            continue;
        }
        const double C = std::ldexp(1.0, found);
        std::map<std::string, double> c{{"C", C}, {"x0", x0}, {"a_exp_lower", q_end}};
        auto v = ConditionVerdict::make_satisfied(x0, opt.x_max, std::move(c));
        if (!best || v.constants.at("C") < best->constants.at("C")) best = v;
    }
    if (best) return *best;
    if (at_cap)
        return ConditionVerdict::make_inconclusive(opt.x0_candidates.front(), opt.x_max,
                                                   "satisfied only at the ladder cap");
    if (have_worst)
        return ConditionVerdict::make_violated(opt.x0_candidates.front(), opt.x_max, worst_x,
                                               std::nullopt,
                                               "psi(x)^2 > psi(Cx) for every dyadic C tested");
    return ConditionVerdict::make_inconclusive(opt.x0_candidates.front(), opt.x_max, "empty grid");
}

ConditionVerdict check_universal_boundedness_condition(const OrliczFunction& psi, int N,
                                                       double alpha,
                                                       const ClassifierOptions& opt) {
    if (N < 1) throw std::invalid_argument("N >= 1 required");
    if (!(alpha > -1.0)) throw std::invalid_argument("alpha > -1 required");
    const double e = (N + 1.0 + alpha) / (alpha + 2.0);
    if (e <= 1.0 + 1e-12) {
        return ConditionVerdict::make_satisfied(
            0.0, opt.x_max, {{"exponent", e}, {"K", 1.0}, {"C", 1.0}},
            "exponent <= 1: condition holds for every Orlicz function");
    }
    std::optional<ConditionVerdict> best;
    bool at_cap = false;
    double worst_x = 0.0;
    bool have_worst = false;
    const double lK_cap = static_cast<double>(opt.max_c_pow2_fast) * std::log(2.0);
    for (double x0 : opt.x0_candidates) {
        const GridEval g = eval_grid(psi, x0, opt);
        for (int cp = 0; cp <= opt.max_c_pow2_fast; ++cp) {
            const double C = std::ldexp(1.0, cp);
            // Deficit e log psi(x) - log psi(Cx) must stay bounded; a trend
            // that keeps growing across the top decades rules this C out.
            std::vector<double> d(g.x.size());
            for (size_t i = 0; i < g.x.size(); ++i)
                d[i] = e * g.log_psi[i] - psi.log_value(C * g.x[i]);
            const auto bot = range_max(g.x, d, x0, 10.0 * x0);
            const auto top = range_max(g.x, d, opt.x_max / 10.0, opt.x_max);
            if (!bot || !top) continue;
            if (top->first - bot->first > std::log(opt.violation_factor)) {
                if (cp == opt.max_c_pow2_fast) {
                    worst_x = top->second;
                    have_worst = true;
                }
                continue;
            }
            const double lK = std::max(0.0, *std::max_element(d.begin(), d.end()));
            if (lK > lK_cap) {
                if (cp == opt.max_c_pow2_fast) at_cap = true;
                continue;
            }
            std::map<std::string, double> c{
                {"exponent", e}, {"K", std::exp(lK)}, {"C", C}, {"x0", x0}};
            auto v = ConditionVerdict::make_satisfied(x0, opt.x_max, std::move(c));
            if (!best || v.constants.at("C") < best->constants.at("C")) best = v;
            break;
        }
    }
    if (best) return *best;
    if (at_cap)
        return ConditionVerdict::make_inconclusive(opt.x0_candidates.front(), opt.x_max,
                                                   "needed constant exceeds the ladder cap");
    if (have_worst)
        return ConditionVerdict::make_violated(opt.x0_candidates.front(), opt.x_max, worst_x,
                                               std::nullopt,
                                               "psi(x)^e / psi(Cx) unbounded for every tested C");
    return ConditionVerdict::make_inconclusive(opt.x0_candidates.front(), opt.x_max, "empty grid");
}

} // namespace borlicz
