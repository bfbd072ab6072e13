#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "borlicz/covering.hpp"
#include "borlicz/errors.hpp"

using namespace borlicz;

namespace {

// Exact weighted volume of a Carleson window on the disk: the angular arc
// has normalized length asin(h/2) * 2 / (2 pi) and the radial band has mass
// (2h - h^2)^{alpha+1}.
double disk_window_volume(double h, double alpha) {
    const double arc = 2.0 * std::asin(std::min(1.0, h / 2.0)) / 3.141592653589793238462643;
    return arc * std::pow(2.0 * h - h * h, alpha + 1.0);
}

} // namespace

TEST_CASE("non-isotropic distance basics") {
    const auto e1 = BallPoint::axis(2, 0);
    const auto e2 = BallPoint::axis(2, 1);
    CHECK(niso_distance(e1, e1) == doctest::Approx(0.0));
    CHECK(niso_distance(e1, e1.scaled(-1.0)) == doctest::Approx(std::sqrt(2.0)));
    CHECK(niso_distance(e1, e2) == doctest::Approx(1.0));

    // Symmetry on random closed-ball pairs.
    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
        const auto a = random_ball_point(2, 0.0, rng);
        const auto b = random_sphere_point(2, rng);
        CHECK(niso_distance(a, b) == doctest::Approx(niso_distance(b, a)).epsilon(1e-14));
    }
}

TEST_CASE("triangle inequality for d on random closed-ball triples") {
    for (int N : {1, 2, 3}) {
        Rng rng(100 + N);
        for (int i = 0; i < 100000 / 3; ++i) {
            const auto a = random_ball_point(N, 0.0, rng);
            const auto b = random_ball_point(N, 0.0, rng);
            const auto c = random_sphere_point(N, rng);
            REQUIRE(niso_distance(a, c) <= niso_distance(a, b) + niso_distance(b, c) + 1e-12);
        }
    }
}

TEST_CASE("window membership predicates") {
    const auto e1 = BallPoint::axis(1, 0);
    CHECK(contains(WindowSpec(e1, 0.5, WindowKind::NisoBallS), e1.scaled(0.9)));
    CHECK_FALSE(contains(WindowSpec(e1, 0.1, WindowKind::CarlesonWindowW), e1.scaled(0.8)));
    CHECK(contains(WindowSpec(e1, 0.1, WindowKind::CarlesonWindowW), e1.scaled(0.95)));

    // The origin is never inside a Carleson window for h <= 1.
    for (double h : {0.1, 0.5, 1.0})
        CHECK_FALSE(contains(WindowSpec(e1, h, WindowKind::CarlesonWindowW), BallPoint::zero(1)));

    CHECK_THROWS_AS(WindowSpec(e1.scaled(0.5), 0.5, WindowKind::NisoBallS), std::invalid_argument);
    CHECK_THROWS_AS(WindowSpec(e1, 1.5, WindowKind::NisoBallS), std::invalid_argument);
}

TEST_CASE("covering on the circle at r = 1") {
    const auto cov = build_covering(1, 1.0, 42);
    CHECK(cov.centers().size() >= 2);
    CHECK(cov.verify_separation());
    Rng rng(5);
    for (int i = 0; i < 10000; ++i)
        REQUIRE(cov.cap_index_of(random_sphere_point(1, rng)) >= 0);
}

TEST_CASE("covering separation and coverage at small radii") {
    for (int N : {1, 2}) {
        for (double r : {0.25, 1.0 / 16.0}) {
            const auto cov = build_covering(N, r, 97);
            CHECK(cov.verify_separation());
            Rng rng(11);
            for (int i = 0; i < 2000; ++i) {
                const auto p = random_sphere_point(N, rng);
                REQUIRE(cov.cap_index_of(p) >= 0);
            }
            // cap_index_of returns the smallest containing index.
            for (int i = 0; i < 200; ++i) {
                const auto p = random_sphere_point(N, rng);
                const auto all = cov.caps_containing(p, 1.0);
                if (!all.empty()) CHECK(cov.cap_index_of(p) == all.front());
            }
        }
    }
}

TEST_CASE("measured overlap is stable across seeds") {
    std::set<int> ms;
    for (std::uint64_t seed : {1001ULL, 2002ULL, 3003ULL})
        ms.insert(build_covering(2, 1.0 / 8.0, seed).measured_overlap());
    CHECK(*ms.rbegin() - *ms.begin() <= 1);
}

TEST_CASE("cell decomposition structure") {
    CellOptions opt;
    opt.volume_samples = 100000;
    const auto d = build_cells(1, 0.0, 6, 0.25, 31, opt);

    CHECK(d.cell_of(BallPoint::zero(1)) == std::pair<int, int>{0, 0});
    const auto z9 = BallPoint::axis(1, 0, 0.9);
    CHECK(d.cell_of(z9).first == 3);

    // Points beyond the covered coronae are rejected.
    const double deep = 1.0 - std::ldexp(1.0, -(d.max_level() + 2));
    CHECK_THROWS_AS(d.cell_of(BallPoint::axis(1, 0, deep)), OutOfDepth);

    // Membership round trip: cell_of lands in a cell whose predicate accepts
    // the point, the point lies in the enclosing window, and the same-level
    // cells partition the corona (exactly one accepting k).
    Rng rng(77);
    for (int i = 0; i < 10000; ++i) {
        const auto z = random_ball_point(1, 0.0, rng).scaled(d.covered_radius() * 0.999);
        const auto [n, k] = d.cell_of(z);
        CHECK(d.in_cell(z, n, k));
        CHECK(d.in_inflated_cell(z, n, k));
        if (!z.is_origin()) {
            const auto w = d.enclosing_window(n, k);
            const bool in_closed_window =
                (1.0 - z.norm()) <= w.h + 1e-15 &&
                niso_distance_sq(w.center, z.normalized()) < w.h;
            CHECK(in_closed_window);
        }
        int accepting = 0;
        for (int kk = 0; kk < d.cells_at(n); ++kk)
            if (d.in_cell(z, n, kk)) ++accepting;
        CHECK(accepting == 1);
    }

    // Inflated cells keep bounded overlap and total mass below the overlap count.
    CHECK(d.measured_inflated_overlap() >= 1);
    CHECK(d.inflated_volume_sum() <= d.measured_inflated_overlap() + 1e-12);
    CHECK(d.volume_ratio_bound() >= 1.0);
}

TEST_CASE("corona volumes match the closed-form law on the disk") {
    CellOptions opt;
    opt.volume_samples = 200000;
    const auto d = build_cells(1, 0.0, 5, 0.25, 131, opt);
    // Sum of cell volumes at level n = mass of the corona.
    for (int n = 0; n <= d.max_level(); ++n) {
        double level_mass = 0.0;
        for (const auto& c : d.cells())
            if (c.level == n) level_mass += c.measured_volume;
        const auto [lo, hi] = d.corona_bounds(n);
        const double expect = (1.0 - lo * lo) - (1.0 - hi * hi);
        CHECK(level_mass == doctest::Approx(expect).epsilon(0.05));
    }
    // Window volumes decay with the expected exponent N+1+alpha = 2.
    const auto e1 = BallPoint::axis(1, 0);
    (void)e1;
    for (int j = 1; j <= 4; ++j) {
        const double h = std::ldexp(1.0, -j);
        CHECK(disk_window_volume(h, 0.0) / disk_window_volume(h / 2.0, 0.0) ==
              doctest::Approx(4.0).epsilon(0.35));
    }
}

TEST_CASE("window equivalence S(C1 h) within W(h) within S(C2 h)") {
    const auto e1 = BallPoint::axis(2, 0);
    Rng rng(313);
    for (double h : {0.25, 1.0 / 16.0}) {
        double c2 = 0.0;
        double c1 = 1.0;
        std::vector<BallPoint> cloud;
        for (int i = 0; i < 40000; ++i) {
            auto z = random_ball_point(2, 0.0, rng);
            // Concentrate the cloud near the window pole to see both sets.
            z = BallPoint(2, 1.0 - (1.0 - z.coord(0).real()) * h, z.coord(1) * h);
            if (!z.in_open_ball()) continue;
            cloud.push_back(z);
        }
        const WindowSpec w(e1, h, WindowKind::CarlesonWindowW);
        for (const auto& z : cloud) {
            const double dsq = niso_distance_sq(e1, z);
            if (contains(w, z)) c2 = std::max(c2, dsq / h);
            else c1 = std::min(c1, dsq / h);
        }
        // Fitted constants: W subset S(C2 h), and S(c h) subset W(h) for c < c1.
        CHECK(c2 <= 2.0 + 1e-9);
        CHECK(c1 > 0.01);
        for (const auto& z : cloud)
            if (niso_distance_sq(e1, z) < 0.99 * c1 * h) CHECK(contains(w, z));
    }
}

TEST_CASE("cell sampler stays inside its cell") {
    const auto d = build_cells(2, 0.0, 4, 0.25, 55, CellOptions{.covering = {}, .volume_samples = 50000, .overlap_cloud = 2000});
    Rng rng(999);
    for (const auto& [n, k] : std::vector<std::pair<int, int>>{{0, 0}, {2, 1}, {4, 3}}) {
        if (k >= d.cells_at(n)) continue;
        const auto pts = d.sample_cell(n, k, 64, rng);
        CHECK(pts.size() >= 32);
        for (const auto& z : pts) REQUIRE(d.in_cell(z, n, k));
    }
}

TEST_CASE("cells CSV export is deterministic") {
    CellOptions opt;
    opt.volume_samples = 20000;
    opt.overlap_cloud = 2000;
    const auto d1 = build_cells(1, 0.5, 4, 0.25, 77, opt);
    const auto d2 = build_cells(1, 0.5, 4, 0.25, 77, opt);
    export_cells_csv(d1, "cells_a.csv");
    export_cells_csv(d2, "cells_b.csv");
    auto slurp = [](const char* p) {
        std::ifstream is(p);
        std::stringstream ss;
        ss << is.rdbuf();
        return ss.str();
    };
    const auto a = slurp("cells_a.csv");
    CHECK(a == slurp("cells_b.csv"));
    CHECK(a.find("# schema=") == 0);
    std::remove("cells_a.csv");
    std::remove("cells_b.csv");
}
