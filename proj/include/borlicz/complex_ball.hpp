#pragma once

#include <array>
#include <complex>
#include <span>

namespace borlicz {

// A point of the closed unit ball of C^N, N <= 3, stored as N complex
// coordinates with the squared Euclidean norm cached. The same type carries
// sphere points (unit norm); helpers that require one check the invariant.
class BallPoint {
public:
    static constexpr int kMaxDim = 3;
    using Complex = std::complex<double>;

    BallPoint() = default;
    explicit BallPoint(std::span<const Complex> coords);
    BallPoint(int N, const Complex& z1, const Complex& z2 = {}, const Complex& z3 = {});

    static BallPoint zero(int N);
    // t * e_axis (axis is 0-based).
    static BallPoint axis(int N, int axis, double t = 1.0);

    int dim() const { return dim_; }
    const Complex& coord(int j) const { return z_[static_cast<size_t>(j)]; }
    double norm_sq() const { return norm_sq_; }
    double norm() const;

    BallPoint scaled(double s) const;
    BallPoint normalized() const; // direction z/|z|; throws for the origin

    bool in_open_ball() const { return norm_sq_ < 1.0; }
    bool in_closed_ball(double tol = 1e-12) const { return norm_sq_ <= 1.0 + tol; }
    bool is_unit(double tol = 1e-9) const;
    bool is_origin() const { return norm_sq_ == 0.0; }

private:
    std::array<Complex, kMaxDim> z_{};
    int dim_ = 0;
    double norm_sq_ = 0.0;
};

// Hermitian inner product <a, b> = sum_j a_j conj(b_j).
std::complex<double> hermitian_inner(const BallPoint& a, const BallPoint& b);

// Non-isotropic distance d(a, b) = sqrt(|1 - <a, b>|) on the closed ball.
double niso_distance(const BallPoint& a, const BallPoint& b);
double niso_distance_sq(const BallPoint& a, const BallPoint& b);

enum class WindowKind {
    NisoBallS,       // S(xi, h)  = { z in B_N : d(xi, z)^2 < h }
    CarlesonWindowW, // W(xi, h)  = { z in B_N : 1 - |z| < h, z/|z| in Q(xi, h) }
    SphereCapQ,      // Q(xi, h)  = { z on S_N : d(xi, z)^2 < h }
};

struct WindowSpec {
    BallPoint center; // unit norm
    double h = 0.0;   // in (0, 1]
    WindowKind kind = WindowKind::CarlesonWindowW;

    WindowSpec() = default;
    WindowSpec(BallPoint xi, double radius, WindowKind k);
};

bool contains(const WindowSpec& spec, const BallPoint& z);

} // namespace borlicz
