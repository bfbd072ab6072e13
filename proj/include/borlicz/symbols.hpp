#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "borlicz/complex_ball.hpp"

namespace borlicz {

struct MonomialTerm {
    int out = 0;                      // output coordinate
    std::array<int, 3> powers{};      // multi-index in z_1..z_N
    std::complex<double> coeff;
};

// Holomorphic self-map of the ball. Construction enforces the self-map
// property: an analytic budget where available (sum of |coeff| <= 1 for
// monomial maps, operator norm <= 1 for linear maps) plus a seeded
// 10^4-point sampled check for every kind.
class SymbolMap {
public:
    enum class Kind { Identity, Constant, Automorphism, Linear, Monomial, RadialDilation };

    static SymbolMap identity(int N);
    static SymbolMap constant(BallPoint w0);
    // The standard involutive automorphism with phi_a(0) = a, phi_a(a) = 0.
    static SymbolMap automorphism(BallPoint a);
    // Row-major N x N matrix with operator norm <= 1.
    static SymbolMap linear(int N, std::vector<std::complex<double>> matrix, std::string label = {});
    // Coordinate recombinations; requires sum over all terms of |coeff| <= 1.
    static SymbolMap monomial(int N, std::vector<MonomialTerm> terms, std::string label = {});
    static SymbolMap radial_dilation(int N, double s);

    BallPoint eval(const BallPoint& z) const;

    int dim() const { return N_; }
    Kind kind() const { return kind_; }
    const std::string& id() const { return id_; }
    // Max of |phi| over the construction check cloud; 1-ish for boundary-touching maps.
    double sup_norm_estimate() const { return sup_norm_estimate_; }
    // Analytic bound on sup |phi| over the open ball: the dilation factor,
    // |w0|, the operator norm, or the coefficient budget; 1 when the image
    // may reach the sphere (identity, automorphisms). Never sampled.
    double sup_norm_bound() const { return sup_norm_bound_; }

private:
    SymbolMap() = default;
    void finalize(std::string id);

    Kind kind_ = Kind::Identity;
    int N_ = 0;
    BallPoint param_point_;                       // constant target / automorphism a
    double scale_ = 1.0;                          // radial dilation factor
    std::vector<std::complex<double>> matrix_;    // linear
    std::vector<MonomialTerm> terms_;             // monomial
    double auto_s_ = 0.0;                         // sqrt(1 - |a|^2)
    double sup_norm_estimate_ = 0.0;
    double sup_norm_bound_ = 1.0;
    std::string id_;
};

// Deterministic experiment corpus: identity, three automorphisms, two linear
// maps, two monomial maps, a constant and two dilations.
std::vector<SymbolMap> catalog_symbols(int N);

} // namespace borlicz
