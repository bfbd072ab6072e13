#include "borlicz/symbols.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "borlicz/covering.hpp"
#include "borlicz/errors.hpp"
#include "borlicz/rng.hpp"

namespace borlicz {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::complex<double> ipow(const std::complex<double>& z, int p) {
    std::complex<double> r = 1.0;
    for (int i = 0; i < p; ++i) r *= z;
    return r;
}

} // namespace

void SymbolMap::finalize(std::string id) {
    id_ = std::move(id);
    // Sampled self-map check; also records the observed sup of |phi|.
    Rng rng(0x5e1fULL ^ static_cast<std::uint64_t>(N_));
    double sup = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const BallPoint z = random_ball_point(N_, 0.0, rng);
        const BallPoint w = eval(z);
        sup = std::max(sup, w.norm());
    }
    sup_norm_estimate_ = sup;
}

SymbolMap SymbolMap::identity(int N) {
    SymbolMap s;
    s.kind_ = Kind::Identity;
    s.N_ = N;
    s.finalize("id");
    return s;
}

SymbolMap SymbolMap::constant(BallPoint w0) {
    if (!w0.in_open_ball()) throw std::invalid_argument("constant symbol must map inside the ball");
    SymbolMap s;
    s.kind_ = Kind::Constant;
    s.N_ = w0.dim();
    s.sup_norm_bound_ = w0.norm();
    s.param_point_ = w0;
    s.finalize("const:" + fmt(w0.norm()));
    return s;
}

SymbolMap SymbolMap::automorphism(BallPoint a) {
    if (!a.in_open_ball()) throw std::invalid_argument("automorphism parameter must be interior");
    SymbolMap s;
    s.kind_ = Kind::Automorphism;
    s.N_ = a.dim();
    s.param_point_ = a;
    s.auto_s_ = std::sqrt(std::max(0.0, 1.0 - a.norm_sq()));
    s.finalize("auto:a=" + fmt(a.norm()));
    return s;
}

SymbolMap SymbolMap::linear(int N, std::vector<std::complex<double>> matrix, std::string label) {
    if (matrix.size() != static_cast<size_t>(N) * static_cast<size_t>(N))
        throw std::invalid_argument("linear symbol needs an N x N matrix");
    SymbolMap s;
    s.kind_ = Kind::Linear;
    s.N_ = N;
    s.matrix_ = std::move(matrix);
    // Operator norm by power iteration on A^H A.
    std::vector<std::complex<double>> v(static_cast<size_t>(N), 1.0 / std::sqrt(double(N)));
    double sigma_sq = 0.0;
    for (int it = 0; it < 60; ++it) {
        std::vector<std::complex<double>> av(static_cast<size_t>(N), 0.0);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                av[static_cast<size_t>(i)] +=
                    s.matrix_[static_cast<size_t>(i * N + j)] * v[static_cast<size_t>(j)];
        std::vector<std::complex<double>> ahav(static_cast<size_t>(N), 0.0);
        for (int j = 0; j < N; ++j)
            for (int i = 0; i < N; ++i)
                ahav[static_cast<size_t>(j)] += std::conj(s.matrix_[static_cast<size_t>(i * N + j)]) *
                                                av[static_cast<size_t>(i)];
        double nrm = 0.0;
        for (const auto& c : ahav) nrm += std::norm(c);
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) {
            sigma_sq = 0.0;
            break;
        }
        sigma_sq = nrm;
        for (auto& c : ahav) c /= nrm;
        v = std::move(ahav);
    }
    if (std::sqrt(sigma_sq) > 1.0 + 1e-9)
        throw SelfMapViolation("linear symbol has operator norm > 1");
    s.sup_norm_bound_ = std::min(1.0, std::sqrt(sigma_sq));
    s.finalize(label.empty() ? "linear" : "linear:" + label);
    return s;
}

SymbolMap SymbolMap::monomial(int N, std::vector<MonomialTerm> terms, std::string label) {
    double budget = 0.0;
    bool nonconstant = false;
    for (const auto& t : terms) {
        if (t.out < 0 || t.out >= N) throw std::invalid_argument("monomial output out of range");
        int deg = 0;
        for (int j = 0; j < N; ++j) deg += t.powers[static_cast<size_t>(j)];
        if (deg > 0) nonconstant = true;
        budget += std::abs(t.coeff);
    }
    if (budget > 1.0 + 1e-12 || (budget == 1.0 && !nonconstant))
        throw SelfMapViolation("monomial symbol violates the coefficient budget");
    SymbolMap s;
    s.kind_ = Kind::Monomial;
    s.N_ = N;
    s.terms_ = std::move(terms);
    double bound_sq = 0.0;
    for (int i = 0; i < N; ++i) {
        double bi = 0.0;
        for (const auto& t : s.terms_)
            if (t.out == i) bi += std::abs(t.coeff);
        bound_sq += bi * bi;
    }
    s.sup_norm_bound_ = std::min(1.0, std::sqrt(bound_sq));
    s.finalize(label.empty() ? "monomial" : "monomial:" + label);
    return s;
}

SymbolMap SymbolMap::radial_dilation(int N, double t) {
    if (!(t > 0.0) || t > 1.0) throw std::invalid_argument("dilation factor must lie in (0, 1]");
    SymbolMap s;
    s.kind_ = Kind::RadialDilation;
    s.N_ = N;
    s.scale_ = t;
    s.sup_norm_bound_ = t;
    s.finalize("dilate:" + fmt(t));
    return s;
}

BallPoint SymbolMap::eval(const BallPoint& z) const {
    if (z.dim() != N_) throw std::invalid_argument("dimension mismatch");
    if (!z.in_open_ball()) throw SelfMapViolation("symbol evaluated outside the open ball");
    BallPoint w;
    switch (kind_) {
        case Kind::Identity: return z;
        case Kind::Constant: return param_point_;
        case Kind::RadialDilation: return z.scaled(scale_);
        case Kind::Automorphism: {
            const BallPoint& a = param_point_;
            if (a.is_origin()) return z.scaled(-1.0);
            const std::complex<double> za = hermitian_inner(z, a);
            const std::complex<double> denom = 1.0 - za;
            const std::complex<double> proj = za / a.norm_sq();
            std::array<std::complex<double>, BallPoint::kMaxDim> out{};
            for (int j = 0; j < N_; ++j) {
                const std::complex<double> pz = proj * a.coord(j);
                const std::complex<double> qz = z.coord(j) - pz;
                out[static_cast<size_t>(j)] = (a.coord(j) - pz - auto_s_ * qz) / denom;
            }
            w = BallPoint(
                std::span<const std::complex<double>>(out.data(), static_cast<size_t>(N_)));
            break;
        }
        case Kind::Linear: {
            std::array<std::complex<double>, BallPoint::kMaxDim> out{};
            for (int i = 0; i < N_; ++i)
                for (int j = 0; j < N_; ++j)
                    out[static_cast<size_t>(i)] +=
                        matrix_[static_cast<size_t>(i * N_ + j)] * z.coord(j);
            w = BallPoint(
                std::span<const std::complex<double>>(out.data(), static_cast<size_t>(N_)));
            break;
        }
        case Kind::Monomial: {
            std::array<std::complex<double>, BallPoint::kMaxDim> out{};
            for (const auto& t : terms_) {
                std::complex<double> v = t.coeff;
                for (int j = 0; j < N_; ++j)
                    v *= ipow(z.coord(j), t.powers[static_cast<size_t>(j)]);
                out[static_cast<size_t>(t.out)] += v;
            }
            w = BallPoint(
                std::span<const std::complex<double>>(out.data(), static_cast<size_t>(N_)));
            break;
        }
    }
    if (!w.in_open_ball()) {
        // Interior points map strictly inside; only rounding can push the
        // result onto the sphere, which we pull back by one ulp-scale nudge.
        if (w.norm_sq() <= 1.0 + 1e-12) return w.scaled(1.0 - 1e-15);
        throw SelfMapViolation("symbol " + id_ + " left the ball");
    }
    return w;
}

std::vector<SymbolMap> catalog_symbols(int N) {
    if (N < 1 || N > 3) throw std::invalid_argument("catalog supports N in {1, 2, 3}");
    std::vector<SymbolMap> out;
    out.push_back(SymbolMap::identity(N));
    for (double t : {0.3, 0.7, 0.95})
        out.push_back(SymbolMap::automorphism(BallPoint::axis(N, 0, t)));

    const std::complex<double> spiral = std::polar(0.8, 0.7853981633974483);
    if (N == 1) {
        out.push_back(SymbolMap::linear(1, {spiral}, "spiral"));
        out.push_back(SymbolMap::linear(1, {std::complex<double>(0.35, 0.35)}, "tilt"));
        out.push_back(SymbolMap::monomial(1, {{0, {2, 0, 0}, 1.0}}, "square"));
        out.push_back(SymbolMap::monomial(1, {{0, {2, 0, 0}, 0.5}, {0, {1, 0, 0}, 0.5}}, "blend"));
    } else if (N == 2) {
        out.push_back(
            SymbolMap::linear(2, {spiral, 0.0, 0.0, std::polar(0.6, -0.5235987755982988)},
                              "spiral"));
        out.push_back(SymbolMap::linear(2, {1.0, 0.0, 0.0, 0.0}, "slice"));
        out.push_back(SymbolMap::monomial(2, {{0, {2, 0, 0}, 0.5}, {1, {0, 2, 0}, 0.5}}, "square"));
        out.push_back(SymbolMap::monomial(
            2, {{0, {1, 1, 0}, 0.5}, {1, {2, 0, 0}, 0.3}, {1, {0, 1, 0}, 0.2}}, "blend"));
    } else {
        out.push_back(SymbolMap::linear(3,
                                        {spiral, 0.0, 0.0, 0.0,
                                         std::polar(0.6, -0.5235987755982988), 0.0, 0.0, 0.0,
                                         std::complex<double>(0.5, 0.0)},
                                        "spiral"));
        out.push_back(SymbolMap::linear(3, {1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0}, "slice"));
        out.push_back(SymbolMap::monomial(
            3, {{0, {2, 0, 0}, 0.4}, {1, {0, 2, 0}, 0.3}, {2, {0, 0, 2}, 0.3}}, "square"));
        out.push_back(SymbolMap::monomial(
            3, {{0, {1, 1, 0}, 0.5}, {1, {0, 1, 1}, 0.3}, {2, {0, 0, 1}, 0.2}}, "blend"));
    }
    out.push_back(SymbolMap::constant(BallPoint::axis(N, 0, 0.2)));
    out.push_back(SymbolMap::radial_dilation(N, 0.5));
    out.push_back(SymbolMap::radial_dilation(N, 0.9));
    return out;
}

} // namespace borlicz
