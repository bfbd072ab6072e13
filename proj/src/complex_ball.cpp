#include "borlicz/complex_ball.hpp"

#include <cmath>
#include <stdexcept>

namespace borlicz {

namespace {

double norm_sq_of(std::span<const std::complex<double>> zs) {
    double s = 0.0;
    for (const auto& z : zs) s += std::norm(z);
    return s;
}

} // namespace

BallPoint::BallPoint(std::span<const Complex> coords) {
    if (coords.empty() || coords.size() > kMaxDim)
        throw std::invalid_argument("BallPoint supports dimensions 1..3");
    dim_ = static_cast<int>(coords.size());
    for (size_t j = 0; j < coords.size(); ++j) z_[j] = coords[j];
    norm_sq_ = norm_sq_of(coords);
}

BallPoint::BallPoint(int N, const Complex& z1, const Complex& z2, const Complex& z3) {
    if (N < 1 || N > kMaxDim) throw std::invalid_argument("BallPoint supports dimensions 1..3");
    dim_ = N;
    z_[0] = z1;
    if (N > 1) z_[1] = z2;
    if (N > 2) z_[2] = z3;
    norm_sq_ = norm_sq_of(std::span<const Complex>(z_.data(), static_cast<size_t>(N)));
}

BallPoint BallPoint::zero(int N) { return BallPoint(N, 0.0); }

BallPoint BallPoint::axis(int N, int axis, double t) {
    if (axis < 0 || axis >= N) throw std::invalid_argument("axis out of range");
    BallPoint p = zero(N);
    p.z_[static_cast<size_t>(axis)] = t;
    p.norm_sq_ = t * t;
    return p;
}

double BallPoint::norm() const { return std::sqrt(norm_sq_); }

BallPoint BallPoint::scaled(double s) const {
    BallPoint p = *this;
    for (int j = 0; j < dim_; ++j) p.z_[static_cast<size_t>(j)] *= s;
    p.norm_sq_ = norm_sq_ * s * s;
    return p;
}

BallPoint BallPoint::normalized() const {
    if (is_origin()) throw std::invalid_argument("cannot normalize the origin");
    return scaled(1.0 / norm());
}

bool BallPoint::is_unit(double tol) const { return std::abs(norm_sq_ - 1.0) <= 2.0 * tol; }

std::complex<double> hermitian_inner(const BallPoint& a, const BallPoint& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
    std::complex<double> s = 0.0;
    for (int j = 0; j < a.dim(); ++j) s += a.coord(j) * std::conj(b.coord(j));
    return s;
}

double niso_distance_sq(const BallPoint& a, const BallPoint& b) {
    return std::abs(1.0 - hermitian_inner(a, b));
}

double niso_distance(const BallPoint& a, const BallPoint& b) {
    return std::sqrt(niso_distance_sq(a, b));
}

WindowSpec::WindowSpec(BallPoint xi, double radius, WindowKind k)
    : center(std::move(xi)), h(radius), kind(k) {
    if (!center.is_unit(1e-12)) throw std::invalid_argument("window center must be a sphere point");
    if (!(h > 0.0) || h > 1.0) throw std::invalid_argument("window radius must lie in (0, 1]");
}

bool contains(const WindowSpec& spec, const BallPoint& z) {
    switch (spec.kind) {
        case WindowKind::NisoBallS:
            return z.in_open_ball() && niso_distance_sq(spec.center, z) < spec.h;
        case WindowKind::SphereCapQ:
            return z.is_unit() && niso_distance_sq(spec.center, z) < spec.h;
        case WindowKind::CarlesonWindowW: {
            // 1 - |0| = 1 >= h for every admissible h, so the origin is never
            // in a Carleson window; testing depth first also avoids z/|z|.
            if (!z.in_open_ball()) return false;
            if (!(1.0 - z.norm() < spec.h)) return false;
            return niso_distance_sq(spec.center, z.normalized()) < spec.h;
        }
    }
    return false;
}

} // namespace borlicz
