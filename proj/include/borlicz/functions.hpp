#pragma once

#include <array>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "borlicz/complex_ball.hpp"
#include "borlicz/orlicz.hpp"
#include "borlicz/symbols.hpp"

namespace borlicz {

struct PolyTerm {
    std::array<int, 3> powers{};
    std::complex<double> coeff;
};

// Analytic test functions on the ball. The Berezin kernel and the extremal
// family are represented as the positive kernels they are used as: every
// norm and inequality below consumes |f|, so no holomorphic branch of the
// fractional power is needed.
//
//   berezin(a, alpha):  H_a(z) = ((1-|a|^2) / |1 - <z,a>|^2)^{N+1+alpha}
//   extremal(a, psi, alpha), h = 1 - |a|, Y = h^{-(N+1+alpha)}:
//       f_a(z) = 2^{-(N+1+alpha)} (psi^{-1}(Y) / Y) H_a(z)
class AnalyticFunction {
public:
    enum class Kind { Constant, Polynomial, Berezin, Extremal, Compose };

    static AnalyticFunction constant(int N, std::complex<double> c);
    static AnalyticFunction polynomial(int N, std::vector<PolyTerm> terms,
                                       std::string label = {});
    static AnalyticFunction berezin(BallPoint a, double alpha);
    static AnalyticFunction extremal(BallPoint a, OrliczFunction psi, double alpha);
    static AnalyticFunction compose(AnalyticFunction f, SymbolMap phi);

    std::complex<double> eval(const BallPoint& z) const;
    double abs_eval(const BallPoint& z) const;

    Kind kind() const { return kind_; }
    int dim() const { return N_; }
    const std::string& name() const { return name_; }

    // Extremal metadata: boundary gap h and the guaranteed floor of |f_a|
    // on the non-isotropic ball S(xi, h) around the boundary anchor.
    double extremal_h() const { return h_; }
    double extremal_floor() const { return floor_; }

private:
    AnalyticFunction() = default;

    Kind kind_ = Kind::Constant;
    int N_ = 1;
    std::string name_;
    std::complex<double> const_value_;
    std::vector<PolyTerm> terms_;
    BallPoint anchor_;       // Berezin / extremal parameter a
    double exponent_ = 0.0;  // N + 1 + alpha
    double prefactor_ = 1.0; // extremal scaling
    double h_ = 0.0;
    double floor_ = 0.0;
    std::shared_ptr<const AnalyticFunction> inner_;
    std::shared_ptr<const SymbolMap> map_;
};

// Deterministic polynomial test family on the ball (degree <= 4).
std::vector<AnalyticFunction> catalog_polynomials(int N);

} // namespace borlicz
