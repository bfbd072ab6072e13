#include "doctest.h"

#include <cmath>
#include <memory>

#include "borlicz/errors.hpp"
#include "borlicz/luxemburg.hpp"
#include "borlicz/maximal.hpp"
#include "helpers.hpp"

using namespace borlicz;

namespace {

std::shared_ptr<const CellDecomposition> disk_decomp(int n_max = 6) {
    CellOptions opt;
    opt.volume_samples = 150000;
    opt.overlap_cloud = 4000;
    return std::make_shared<const CellDecomposition>(build_cells(1, 0.0, n_max, 0.25, 2024, opt));
}

} // namespace

TEST_CASE("luxemburg norm of constants and linear functions") {
    const auto p2 = OrliczFunction::power(2.0);
    const auto v = Measure::weighted_volume(1, 0.0);

    const auto c3 = luxemburg_norm(AnalyticFunction::constant(1, 3.0), p2, v);
    CHECK(c3.norm == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(c3.c_lo <= c3.norm);
    CHECK(c3.c_hi >= c3.norm * (1.0 - 1e-12));

    // f(z) = z has squared integral 1/2, so the quadratic norm is sqrt(1/2).
    const auto fz = AnalyticFunction::polynomial(1, {{{1, 0, 0}, 1.0}}, "z");
    const auto nz = luxemburg_norm(fz, p2, v);
    CHECK(nz.quadrature);
    CHECK(nz.norm == doctest::Approx(std::sqrt(0.5)).epsilon(1e-8));

    // Zero function has zero norm.
    const auto z0 = luxemburg_norm(AnalyticFunction::constant(1, 0.0), p2, v);
    CHECK(z0.norm == 0.0);
}

TEST_CASE("luxemburg norm of an indicator against an empirical measure") {
    // || chi_E ||_psi = 1 / psi^{-1}(1 / mu(E)), checked exactly against the
    // realized empirical measure so no quadrature error enters.
    const auto psi = OrliczFunction::exp_power(1.0, 1.0);
    const auto v = Measure::weighted_volume(1, 0.0);
    const auto emp = Measure::empirical(v.sample(50000, 31));
    const double r = 0.9;
    double mass = 0.0;
    for (size_t i = 0; i < emp.samples()->size(); ++i)
        if (emp.samples()->point(i).norm() > r) mass += emp.samples()->weight[i];
    REQUIRE(mass > 0.05);
    const auto got = luxemburg_norm(
        [&](const BallPoint& z) { return z.norm() > r ? 1.0 : 0.0; }, psi, emp);
    CHECK(got.norm == doctest::Approx(1.0 / psi.inverse(1.0 / mass)).epsilon(1e-7));
}

TEST_CASE("homogeneity of the luxemburg norm") {
    const auto psi = OrliczFunction::exp_power(1.0, 1.0);
    const auto v = Measure::weighted_volume(1, 0.0);
    const auto f = AnalyticFunction::polynomial(1, {{{1, 0, 0}, 1.0}, {{0, 0, 0}, 0.2}}, "z+0.2");
    const double base = luxemburg_norm(f, psi, v).norm;
    for (double t : {0.5, 2.0, 10.0}) {
        const auto scaled = luxemburg_norm(
            [&](const BallPoint& z) { return t * f.abs_eval(z); }, psi, v);
        CHECK(scaled.norm == doctest::Approx(t * base).epsilon(1e-6));
    }
}

TEST_CASE("norm monotonicity in the Orlicz function") {
    // exp(x)-1 dominates x^2 pointwise on [0, inf), so its norm dominates too.
    const auto p2 = OrliczFunction::power(2.0);
    const auto e1 = OrliczFunction::exp_power(1.0, 1.0);
    const auto v = Measure::weighted_volume(1, 0.0);
    for (const auto& f : catalog_polynomials(1)) {
        const double n2 = luxemburg_norm(f, p2, v).norm;
        const double ne = luxemburg_norm(f, e1, v).norm;
        CHECK(ne >= n2 * (1.0 - 1e-9));
    }
}

TEST_CASE("luxemburg norm equals the p-norm for power functions") {
    const auto v = Measure::weighted_volume(1, 0.0);
    for (double p : {1.5, 2.0, 4.0}) {
        const auto psi = OrliczFunction::power(p);
        for (const auto& f : catalog_polynomials(1)) {
            const auto lux = luxemburg_norm(f, psi, v, {.rtol = 1e-9});
            const auto direct = integrate(
                v, [&](const BallPoint& z) { return std::pow(f.abs_eval(z), p); });
            const double pnorm = std::pow(direct.value, 1.0 / p);
            if (pnorm == 0.0)
                CHECK(lux.norm == 0.0);
            else
                CHECK(lux.norm == doctest::Approx(pnorm).epsilon(1e-6));
        }
    }
}

TEST_CASE("point evaluation envelope") {
    const auto p2 = OrliczFunction::power(2.0);
    const auto [lo0, hi0] = point_eval_bounds(BallPoint::zero(1), p2, 0.0);
    CHECK(hi0 == doctest::Approx(p2.inverse(1.0)));
    CHECK(lo0 == doctest::Approx(p2.inverse(1.0) / 16.0));

    const auto [lo, hi] = point_eval_bounds(BallPoint::axis(1, 0, 1.0 / 3.0), p2, 0.0);
    CHECK(hi == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(lo == doctest::Approx(1.0 / 8.0).epsilon(1e-12));

    // The empirical estimate sits inside the envelope (quadrature backend).
    for (double t : {0.3, 0.7}) {
        const auto a = BallPoint::axis(1, 0, t);
        const auto [l, u] = point_eval_bounds(a, p2, 0.0);
        const double est = point_eval_empirical(a, p2, 0.0);
        CHECK(est >= l * (1.0 - 1e-9));
        CHECK(est <= u * (1.0 + 1e-9));
    }
}

TEST_CASE("maximal function of a constant is that constant") {
    auto decomp = disk_decomp(5);
    const auto f = AnalyticFunction::constant(1, std::complex<double>(0.0, 0.7));
    const auto lam = maximal_function(f, decomp, 16, 5);
    Rng rng(6);
    for (int i = 0; i < 500; ++i) {
        const auto z = random_ball_point(1, 0.0, rng).scaled(decomp->covered_radius() * 0.999);
        CHECK(lam.eval(z) == doctest::Approx(0.7));
    }
    CHECK(lam.slack() == doctest::Approx(1.0));
}

TEST_CASE("maximal function dominates the function and respects monotonicity") {
    auto decomp = disk_decomp(6);
    const auto f = AnalyticFunction::polynomial(1, {{{2, 0, 0}, 0.8}}, "0.8z^2");
    const auto g = AnalyticFunction::polynomial(1, {{{2, 0, 0}, 1.2}}, "1.2z^2");
    const auto lf = maximal_function(f, decomp, 48, 5);
    const auto lg = maximal_function(g, decomp, 48, 5);
    Rng rng(7);
    int checked = 0;
    for (int i = 0; i < 2000; ++i) {
        const auto z = random_ball_point(1, 0.0, rng);
        if (z.norm() >= decomp->covered_radius()) continue;
        ++checked;
        REQUIRE(lf.eval(z) * lf.slack() * 1.05 >= f.abs_eval(z));
    }
    CHECK(checked > 1500);
    // |g| >= |f| pointwise here, so the cellwise sups are ordered.
    for (int n = 0; n <= decomp->max_level(); ++n)
        for (int k = 0; k < decomp->cells_at(n); ++k)
            CHECK(lg.cell_value(n, k) >= lf.cell_value(n, k) * (1.0 - 1e-12));
    // Beyond the covered coronae the maximal function is undefined.
    CHECK_THROWS_AS(
        lf.eval(BallPoint::axis(1, 0, 1.0 - std::ldexp(1.0, -(decomp->max_level() + 2)))),
        OutOfDepth);
}

TEST_CASE("maximal operator norm bound is finite and stable") {
    auto decomp = disk_decomp(6);
    const auto psi = OrliczFunction::power(2.0);
    std::vector<AnalyticFunction> family = catalog_polynomials(1);
    family.push_back(AnalyticFunction::berezin(BallPoint::axis(1, 0, 0.5), 0.0));
    const auto fit = fit_maximal_bound(family, psi, decomp, 32, 99,
                                       {.integration = {.mc_count = 40000}});
    CHECK(fit.bound > 0.0);
    CHECK(std::isfinite(fit.bound));
    CHECK(fit.stability > 0.8);
    CHECK(fit.stability < 1.25);
    CHECK(fit.tail_mass < 0.02);
    // Every norm ratio is at most the fitted bound by construction; all of
    // them should be of order one (the operator really is bounded).
    for (double r : fit.ratios) {
        CHECK(r <= fit.bound + 1e-12);
        CHECK(r < 5.0);
    }
}

TEST_CASE("restriction operator edge cases") {
    const auto psi = OrliczFunction::power(2.0);
    std::vector<AnalyticFunction> family = {AnalyticFunction::constant(1, 1.0)};

    // Restriction to almost the whole ball keeps the whole norm.
    const auto v = Measure::weighted_volume(1, 0.0);
    const double near_full = restriction_norm_estimate(psi, 0.0, v, 0.01, family,
                                                       {.integration = {.mc_count = 50000}});
    CHECK(near_full == doctest::Approx(1.0).epsilon(0.02));

    // The annulus misses a point mass at the origin entirely.
    const auto atom = Measure::point_mass(BallPoint::zero(1));
    CHECK(restriction_norm_estimate(psi, 0.0, atom, 0.5, family) == 0.0);

    // A pull-back supported inside |z| <= 1/2 gives exactly zero at r = 0.9.
    const auto mu = Measure::pullback(SymbolMap::radial_dilation(1, 0.5), 0.0, 20000, 3);
    std::vector<AnalyticFunction> fam2 = catalog_polynomials(1);
    CHECK(restriction_norm_estimate(psi, 0.0, mu, 0.9, fam2) == 0.0);
}

TEST_CASE("distributional inequality of the boundary shell") {
    auto decomp = disk_decomp(6);
    std::vector<AnalyticFunction> fs = {
        AnalyticFunction::polynomial(1, {{{1, 0, 0}, 1.0}}, "z"),
        AnalyticFunction::berezin(BallPoint::axis(1, 0, 0.5), 0.0),
    };
    std::vector<MaximalFunction> lams;
    for (const auto& f : fs) lams.push_back(maximal_function(f, decomp, 32, 11));
    std::vector<Measure> mus = {
        Measure::weighted_volume(1, 0.0),
        Measure::pullback(SymbolMap::automorphism(BallPoint::axis(1, 0, 0.7)), 0.0, 100000, 5),
    };
    std::vector<CarlesonProfile> profs;
    for (const auto& mu : mus) profs.push_back(carleson_profile(mu, 0.0, dyadic_h_grid(1, 8), 21));
    const double hs[] = {0.25, 0.125};
    const auto rep = check_distributional_inequality(fs, lams, mus, profs, hs, 4);
    CHECK(!rep.cases.empty());
    CHECK(rep.fitted_c > 0.0);
    CHECK(std::isfinite(rep.fitted_c));
    for (const auto& c : rep.cases)
        if (c.ratio >= 0.0) CHECK(c.lhs <= rep.fitted_c * c.k2h * c.v_super + 1e-12);
}
