#include "borlicz/functions.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace borlicz {

namespace {

std::complex<double> ipow(const std::complex<double>& z, int p) {
    std::complex<double> r = 1.0;
    for (int i = 0; i < p; ++i) r *= z;
    return r;
}

} // namespace

AnalyticFunction AnalyticFunction::constant(int N, std::complex<double> c) {
    AnalyticFunction f;
    f.kind_ = Kind::Constant;
    f.N_ = N;
    f.const_value_ = c;
    std::ostringstream os;
    os << "const(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)";
    f.name_ = os.str();
    return f;
}

AnalyticFunction AnalyticFunction::polynomial(int N, std::vector<PolyTerm> terms,
                                              std::string label) {
    AnalyticFunction f;
    f.kind_ = Kind::Polynomial;
    f.N_ = N;
    f.terms_ = std::move(terms);
    f.name_ = label.empty() ? "poly" : "poly:" + label;
    return f;
}

AnalyticFunction AnalyticFunction::berezin(BallPoint a, double alpha) {
    if (!a.in_open_ball()) throw std::invalid_argument("kernel anchor must be interior");
    AnalyticFunction f;
    f.kind_ = Kind::Berezin;
    f.N_ = a.dim();
    f.anchor_ = a;
    f.exponent_ = a.dim() + 1.0 + alpha;
    std::ostringstream os;
    os << "berezin(|a|=" << a.norm() << ",alpha=" << alpha << ")";
    f.name_ = os.str();
    return f;
}

AnalyticFunction AnalyticFunction::extremal(BallPoint a, OrliczFunction psi, double alpha) {
    if (!a.in_open_ball()) throw std::invalid_argument("extremal anchor must be interior");
    AnalyticFunction f;
    f.kind_ = Kind::Extremal;
    f.N_ = a.dim();
    f.anchor_ = a;
    f.exponent_ = a.dim() + 1.0 + alpha;
    f.h_ = 1.0 - a.norm();
    const double big = std::pow(1.0 / f.h_, f.exponent_);
    const double inv = psi.inverse(big);
    f.prefactor_ = std::pow(0.5, f.exponent_) * inv / big;
    f.floor_ = inv / std::pow(8.0, f.exponent_);
    std::ostringstream os;
    os << "extremal(h=" << f.h_ << ",psi=" << psi.id() << ",alpha=" << alpha << ")";
    f.name_ = os.str();
    return f;
}

AnalyticFunction AnalyticFunction::compose(AnalyticFunction f, SymbolMap phi) {
    if (f.dim() != phi.dim()) throw std::invalid_argument("dimension mismatch in composition");
    AnalyticFunction g;
    g.kind_ = Kind::Compose;
    g.N_ = phi.dim();
    g.name_ = f.name() + " o " + phi.id();
    g.inner_ = std::make_shared<AnalyticFunction>(std::move(f));
    g.map_ = std::make_shared<SymbolMap>(std::move(phi));
    return g;
}

std::complex<double> AnalyticFunction::eval(const BallPoint& z) const {
    if (z.dim() != N_) throw std::invalid_argument("dimension mismatch");
    switch (kind_) {
        case Kind::Constant: return const_value_;
        case Kind::Polynomial: {
            std::complex<double> acc = 0.0;
            for (const auto& t : terms_) {
                std::complex<double> v = t.coeff;
                for (int j = 0; j < N_; ++j)
                    v *= ipow(z.coord(j), t.powers[static_cast<size_t>(j)]);
                acc += v;
            }
            return acc;
        }
        case Kind::Berezin:
        case Kind::Extremal: {
            const std::complex<double> den = 1.0 - hermitian_inner(z, anchor_);
            const double ratio = (1.0 - anchor_.norm_sq()) / std::norm(den);
            const double v = std::pow(ratio, exponent_);
            return kind_ == Kind::Berezin ? v : prefactor_ * v;
        }
        case Kind::Compose: return inner_->eval(map_->eval(z));
    }
    return 0.0;
}

double AnalyticFunction::abs_eval(const BallPoint& z) const { return std::abs(eval(z)); }

std::vector<AnalyticFunction> catalog_polynomials(int N) {
    using C = std::complex<double>;
    std::vector<AnalyticFunction> out;
    out.push_back(AnalyticFunction::constant(N, 1.0));
    out.push_back(AnalyticFunction::polynomial(N, {{{1, 0, 0}, 1.0}}, "z1"));
    out.push_back(AnalyticFunction::polynomial(N, {{{2, 0, 0}, 1.0}}, "z1^2"));
    out.push_back(AnalyticFunction::polynomial(
        N, {{{0, 0, 0}, 0.5}, {{1, 0, 0}, C(0.0, 1.0)}}, "0.5+iz1"));
    out.push_back(AnalyticFunction::polynomial(
        N, {{{3, 0, 0}, 2.0}, {{1, 0, 0}, -1.0}}, "2z1^3-z1"));
    out.push_back(AnalyticFunction::polynomial(
        N, {{{4, 0, 0}, 1.0}, {{2, 0, 0}, C(0.5, -0.5)}, {{0, 0, 0}, 0.25}}, "quartic"));
    if (N >= 2) {
        out.push_back(AnalyticFunction::polynomial(N, {{{0, 1, 0}, 1.0}}, "z2"));
        out.push_back(AnalyticFunction::polynomial(
            N, {{{1, 1, 0}, 1.0}, {{0, 0, 0}, 0.3}}, "z1z2+0.3"));
    }
    if (N >= 3)
        out.push_back(AnalyticFunction::polynomial(
            N, {{{1, 1, 1}, 1.0}, {{0, 0, 1}, -0.5}}, "z1z2z3-0.5z3"));
    return out;
}

} // namespace borlicz
