#include "doctest.h"

#include <cmath>
#include <cstdio>

#include "borlicz/errors.hpp"
#include "borlicz/functions.hpp"
#include "borlicz/measure.hpp"
#include "helpers.hpp"

using namespace borlicz;
namespace bt = borlicz::testing;

TEST_CASE("normalizing constant of the weighted volume") {
    CHECK(c_alpha(1, 0.0) == doctest::Approx(1.0));
    CHECK(c_alpha(1, 1.0) == doctest::Approx(2.0));
    CHECK(c_alpha(2, 0.0) == doctest::Approx(1.0));
    CHECK(c_alpha(2, 3.0) == doctest::Approx(10.0)); // (4/1)(5/2)
    // Against the Gamma form for fractional alpha.
    const double a = 0.7;
    const double expect = std::exp(std::lgamma(2 + a + 1) - std::lgamma(a + 1) - std::lgamma(3.0));
    CHECK(c_alpha(2, a) == doctest::Approx(expect).epsilon(1e-12));
    CHECK_THROWS_AS(c_alpha(1, -1.0), std::domain_error);
}

TEST_CASE("radial law of the weighted-volume sampler") {
    // The squared radius must follow the density ~ (1-s)^alpha s^{N-1}; the
    // reference CDF comes from direct 1-D integration, not from the sampler.
    struct Case {
        int N;
        double alpha;
    };
    for (const auto& [N, alpha] : {Case{1, 0.0}, Case{1, 2.0}, Case{2, 0.0}, Case{2, 1.5}}) {
        const bt::RadialCdf cdf(N, alpha);
        const auto m = Measure::weighted_volume(N, alpha);
        const auto s = m.realize(1000000, 99 + N);
        std::vector<double> r2(s.size());
        for (size_t i = 0; i < s.size(); ++i) {
            const double d = s.depth[i];
            r2[i] = (1.0 - d) * (1.0 - d);
        }
        CHECK(bt::ks_distance(std::move(r2), cdf) < 0.002);
    }
}

TEST_CASE("sampler moments on the disk") {
    const auto m = Measure::weighted_volume(1, 0.0);
    const auto est = integrate(
        m, [](const BallPoint& z) { return z.norm_sq(); },
        {.mode = IntegrationMode::MonteCarlo, .mc_count = 1000000, .seed = 5});
    CHECK(std::abs(est.value - 0.5) < 3.0 * est.stderr_);
}

TEST_CASE("pull-back of a constant symbol sits at its target") {
    const auto phi = SymbolMap::constant(BallPoint::zero(2));
    const auto mu = Measure::pullback(phi, 0.0, 1000, 7);
    REQUIRE(mu.samples() != nullptr);
    for (size_t i = 0; i < mu.samples()->size(); ++i)
        CHECK(mu.samples()->point(i).norm() == doctest::Approx(0.0));
}

TEST_CASE("quadrature normalization and radial moment") {
    for (double alpha : {0.0, 2.0}) {
        const auto m = Measure::weighted_volume(1, alpha);
        const auto one = integrate(m, [](const BallPoint&) { return 1.0; });
        CHECK(one.value == doctest::Approx(1.0).epsilon(1e-12));
    }
    const auto m = Measure::weighted_volume(1, 0.0);
    const auto sq = integrate(m, [](const BallPoint& z) { return z.norm_sq(); });
    CHECK(sq.value == doctest::Approx(0.5).epsilon(1e-10));
    // MC for N = 2 normalization is exact on the constant integrand.
    const auto m2 = Measure::weighted_volume(2, 0.0);
    const auto one2 = integrate(m2, [](const BallPoint&) { return 1.0; },
                                {.mode = IntegrationMode::MonteCarlo, .mc_count = 1000});
    CHECK(one2.value == doctest::Approx(1.0));
    CHECK_THROWS_AS(integrate(m2, [](const BallPoint&) { return 1.0; },
                              {.mode = IntegrationMode::Quadrature1D}),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate(m, [](const BallPoint&) { return std::nan(""); },
                              {.mode = IntegrationMode::MonteCarlo, .mc_count = 10}),
                    NonFinite);
}

TEST_CASE("kernel mass is one on the disk") {
    const auto m = Measure::weighted_volume(1, 0.0);
    const auto H = AnalyticFunction::berezin(BallPoint::axis(1, 0, 0.7), 0.0);
    const auto est = integrate(m, [&](const BallPoint& z) { return H.abs_eval(z); },
                               {.radial_nodes = 192, .angular_nodes = 256});
    CHECK(est.value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("quadrature agrees with Monte Carlo on polynomial integrands") {
    const auto m = Measure::weighted_volume(1, 1.0);
    Rng rng(31);
    for (int rep = 0; rep < 10; ++rep) {
        const double a = rng.uniform(-1.0, 1.0), b = rng.uniform(-1.0, 1.0);
        const double c = rng.uniform(-1.0, 1.0);
        auto f = [=](const BallPoint& z) {
            const double x = z.coord(0).real(), y = z.coord(0).imag();
            return a * x * x + b * x * y + c * y * y * y + 0.25;
        };
        const auto q = integrate(m, f);
        const auto mc = integrate(m, f,
                                  {.mode = IntegrationMode::MonteCarlo,
                                   .mc_count = 200000,
                                   .seed = 1234 + static_cast<std::uint64_t>(rep)});
        CHECK(std::abs(q.value - mc.value) < 4.0 * (mc.stderr_ + q.stderr_ + 1e-12));
    }
}

TEST_CASE("window masses") {
    const auto e1 = BallPoint::axis(1, 0);
    const auto m = Measure::weighted_volume(1, 0.0);
    // The full window at h = 1 does not exhaust the disk.
    const auto full =
        window_mass(m, WindowSpec(e1, 1.0, WindowKind::CarlesonWindowW), {.mc_count = 200000});
    CHECK(full.value < 1.0);
    CHECK(full.value > 0.2);
    // Monte Carlo masses match the closed form across dyadic radii.
    for (int j = 1; j <= 6; ++j) {
        const double h = std::ldexp(1.0, -j);
        const auto est = window_mass(m, WindowSpec(e1, h, WindowKind::CarlesonWindowW),
                                     {.mc_count = 400000, .seed = 17});
        const double expect = bt::disk_window_volume(h, 0.0);
        CHECK(std::abs(est.value - expect) < 4.0 * est.stderr_ + 1e-9);
    }
    // A point mass just inside the window belongs to it entirely.
    const auto atom = Measure::point_mass(e1.scaled(0.99));
    const auto hit = window_mass(atom, WindowSpec(e1, 0.02, WindowKind::CarlesonWindowW));
    CHECK(hit.value == doctest::Approx(1.0));
    CHECK(hit.stderr_ == 0.0);
}

TEST_CASE("carleson profile of the weighted volume") {
    const auto m = Measure::weighted_volume(1, 0.0);
    const auto prof = carleson_profile(m, 0.0, dyadic_h_grid(1, 6), 11, {.mc_count = 400000});
    REQUIRE(prof.h.size() == 6);
    // rho nondecreasing in h (descending grid: nonincreasing along the vector).
    for (size_t j = 1; j < prof.h.size(); ++j) CHECK(prof.rho[j] <= prof.rho[j - 1] + 1e-12);
    // K is the running sup of rho(t)/t^2 over t <= h.
    const double mexp = prof.exponent();
    for (size_t j = 0; j < prof.h.size(); ++j) {
        double expect = 0.0;
        for (size_t k = j; k < prof.h.size(); ++k)
            expect = std::max(expect, prof.rho[k] / std::pow(prof.h[k], mexp));
        CHECK(prof.k[j] == doctest::Approx(expect));
    }
    // The weighted volume is its own calibration: K stays within one decade.
    for (double k : prof.k) {
        CHECK(k < 10.0);
        CHECK(k > 0.1);
    }
    // And rho(h) tracks the closed-form window volume within a small factor
    // (the sup over directions is attained up to grid resolution).
    for (size_t j = 0; j < prof.h.size(); ++j) {
        const double expect = bt::disk_window_volume(prof.h[j], 0.0);
        CHECK(prof.rho[j] > 0.5 * expect);
        CHECK(prof.rho[j] < 2.0 * expect + 5.0 * prof.rho_stderr[j]);
    }
}

TEST_CASE("profiles of degenerate measures") {
    const auto atom0 = Measure::point_mass(BallPoint::zero(1));
    const auto p0 = carleson_profile(atom0, 0.0, dyadic_h_grid(1, 8), 3);
    for (double r : p0.rho) CHECK(r == 0.0);
    CHECK(p0.exact);
    CHECK(p0.support_depth == doctest::Approx(1.0));

    // An empirical measure stacked in one window is found by the
    // boundary-aligned direction candidates.
    const auto xi = BallPoint::axis(2, 0);
    std::vector<BallPoint> pts;
    Rng rng(5);
    const double h = std::ldexp(1.0, -5);
    for (const auto& z : bt::sample_niso_ball(xi, 0.8 * h, 500, rng))
        if (1.0 - z.norm() < 0.8 * h) pts.push_back(z);
    REQUIRE(pts.size() > 100);
    const auto emp = Measure::empirical(pts);
    const auto prof = carleson_profile(emp, 0.0, dyadic_h_grid(1, 6), 3, {.xi_grid_size = 64});
    CHECK(prof.rho[4] == doctest::Approx(1.0)); // h = 2^-5
}

TEST_CASE("pull-back change of variables") {
    const auto phi = SymbolMap::automorphism(BallPoint::axis(1, 0, 0.5));
    const auto mu = Measure::pullback(phi, 0.0, 200000, 77);
    const auto v = Measure::weighted_volume(1, 0.0);
    const std::vector<std::function<double(const BallPoint&)>> gs = {
        [](const BallPoint& z) { return z.norm_sq(); },
        [](const BallPoint& z) { return z.coord(0).real(); },
        [](const BallPoint& z) { return std::abs(z.coord(0)); },
        [](const BallPoint& z) { return std::exp(-z.norm_sq()); },
        [](const BallPoint& z) { return z.coord(0).imag() * z.coord(0).real() + 0.2; },
    };
    for (const auto& g : gs) {
        const auto lhs = integrate(mu, g);
        const auto rhs = integrate(
            v, [&](const BallPoint& z) { return g(phi.eval(z)); },
            {.mode = IntegrationMode::MonteCarlo, .mc_count = 200000, .seed = 400});
        CHECK(std::abs(lhs.value - rhs.value) < 3.0 * (lhs.stderr_ + rhs.stderr_) + 1e-12);
    }
}

TEST_CASE("seed determinism of sample streams") {
    const auto v = Measure::weighted_volume(2, 1.0);
    const auto a = v.sample(500, 42);
    const auto b = v.sample(500, 42);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i)
        for (int j = 0; j < 2; ++j) CHECK(a[i].coord(j) == b[i].coord(j));

    const auto phi = SymbolMap::radial_dilation(2, 0.9);
    const auto m1 = Measure::pullback(phi, 0.0, 1000, 9);
    const auto m2 = Measure::pullback(phi, 0.0, 1000, 9);
    REQUIRE(m1.samples()->size() == m2.samples()->size());
    for (size_t i = 0; i < m1.samples()->coords.size(); ++i)
        CHECK(m1.samples()->coords[i] == m2.samples()->coords[i]);
}

TEST_CASE("sample-set cache round trip") {
    const auto phi = SymbolMap::automorphism(BallPoint::axis(2, 0, 0.3));
    const auto mu = Measure::pullback(phi, 1.0, 2000, 13);
    save_sample_set(*mu.samples(), "cache_test.bin");
    const auto back = load_sample_set("cache_test.bin");
    REQUIRE(back.has_value());
    CHECK(back->N == 2);
    CHECK(back->size() == mu.samples()->size());
    for (size_t i = 0; i < back->coords.size(); ++i)
        CHECK(back->coords[i] == mu.samples()->coords[i]);
    std::remove("cache_test.bin");
    CHECK_FALSE(load_sample_set("no_such_file.bin").has_value());
}

TEST_CASE("profile over non-isotropic balls instead of windows") {
    const auto m = Measure::weighted_volume(1, 0.0);
    const auto prof =
        carleson_profile(m, 0.0, dyadic_h_grid(1, 5), 11, {.mc_count = 200000, .s_balls = true});
    CHECK(prof.s_balls);
    // S-ball masses on the disk also scale like h^2: a 16^2-fold drop over
    // four dyadic steps, up to finite-h corrections and MC slack.
    const double drop = prof.rho.front() / (prof.rho.back() + 1e-300);
    CHECK(drop > std::pow(16.0, 1.5));
    CHECK(drop < std::pow(16.0, 2.5));
}
