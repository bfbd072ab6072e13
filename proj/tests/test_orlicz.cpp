#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "borlicz/orlicz.hpp"
#include "borlicz/rng.hpp"

using namespace borlicz;

namespace {

// Independent oracle for the Legendre transform: dense grid sweep of
// sup_x (x y - psi(x)) over [0, span], refined once around the best point.
double conjugate_bruteforce(const OrliczFunction& psi, double y, double span = 10.0) {
    double best = 0.0, best_x = 0.0;
    const int n = 200000;
    for (int i = 0; i <= n; ++i) {
        const double x = span * i / n;
        const double v = x * y - psi.value(x);
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    const double lo = std::max(0.0, best_x - span / n);
    const double hi = best_x + span / n;
    for (int i = 0; i <= 2000; ++i) {
        const double x = lo + (hi - lo) * i / 2000.0;
        best = std::max(best, x * y - psi.value(x));
    }
    return best;
}

std::vector<OrliczFunction> catalog() {
    return {OrliczFunction::power(2.0), OrliczFunction::power(4.0),
            OrliczFunction::power_log(1.0, 2.0, 1.0), OrliczFunction::exp_power(1.0, 1.0),
            OrliczFunction::exp_log_power(1.0, 2.0)};
}

} // namespace

TEST_CASE("family parameter domains") {
    CHECK_THROWS_AS(OrliczFunction::power(1.0), std::invalid_argument);
    CHECK_THROWS_AS(OrliczFunction::power(0.5), std::invalid_argument);
    CHECK_THROWS_AS(OrliczFunction::exp_power(-1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(OrliczFunction::exp_power(1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(OrliczFunction::exp_log_power(1.0, 0.9), std::invalid_argument);
    // (1+x)^a - 1 with a <= 1 is not superlinear.
    CHECK_THROWS_AS(OrliczFunction::exp_log_power(1.0, 1.0), std::invalid_argument);
    CHECK_NOTHROW(OrliczFunction::exp_log_power(2.0, 1.0));
    CHECK_THROWS_AS(OrliczFunction::tabulated({1.0, 2.0}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(OrliczFunction::tabulated({1.0, 2.0, 2.0}, {1.0, 2.0, 3.0}),
                    std::invalid_argument);
}

TEST_CASE("evaluation examples") {
    const auto p2 = OrliczFunction::power(2.0);
    CHECK(p2.value(3.0) == doctest::Approx(9.0));
    CHECK_THROWS_AS(p2.value(-1.0), std::domain_error);

    const auto e1 = OrliczFunction::exp_power(1.0, 1.0);
    CHECK(e1.value(std::log(2.0)) == doctest::Approx(1.0));
    CHECK(e1.log1p_value(1000.0) == doctest::Approx(1000.0));
    CHECK(e1.value(1000.0) == std::numeric_limits<double>::infinity());
    CHECK(std::isfinite(e1.log1p_value(1e300)));

    for (const auto& psi : catalog()) {
        CHECK(psi.value(0.0) == 0.0);
        CHECK(psi.log1p_value(0.0) == 0.0);
    }
}

TEST_CASE("log1p scale agrees with linear scale where linear does not overflow") {
    for (const auto& psi : catalog()) {
        for (double x : log_spaced_grid(1e-6, 300.0, 60)) {
            const double lin = psi.value(x);
            if (!std::isfinite(lin) || lin == 0.0) continue;
            CHECK(psi.log1p_value(x) == doctest::Approx(std::log1p(lin)).epsilon(1e-12));
        }
    }
}

TEST_CASE("inverse examples and round trips") {
    CHECK(OrliczFunction::exp_power(1.0, 1.0).inverse(1.0) == doctest::Approx(std::log(2.0)));
    CHECK(OrliczFunction::power(2.0).inverse(9.0) == doctest::Approx(3.0));
    CHECK(OrliczFunction::exp_log_power(1.0, 2.0).inverse(std::exp(1.0) - 1.0) ==
          doctest::Approx(std::exp(1.0) - 1.0));
    for (const auto& psi : catalog()) {
        CHECK(psi.inverse(0.0) == 0.0);
        for (double x : log_spaced_grid(1e-3, 100.0, 100)) {
            const double y = psi.value(x);
            if (!std::isfinite(y)) continue;
            CHECK(psi.inverse(y) == doctest::Approx(x).epsilon(1e-9));
        }
    }
}

TEST_CASE("convexity and strict convexity on sampled pairs") {
    Rng rng(91);
    for (const auto& psi : catalog()) {
        for (int i = 0; i < 500; ++i) {
            const double x = std::exp(rng.uniform(std::log(1e-4), std::log(1e6)));
            const double y = std::exp(rng.uniform(std::log(1e-4), std::log(1e6)));
            const double mid = psi.log1p_value(0.5 * (x + y));
            const double avg = std::log1p(0.5 * (std::expm1(psi.log1p_value(x)) +
                                                 std::expm1(psi.log1p_value(y))));
            // Overflow-prone pairs are compared in the log scale instead.
            if (std::isfinite(psi.value(x)) && std::isfinite(psi.value(y))) {
                CHECK(psi.value(0.5 * (x + y)) <=
                      0.5 * (psi.value(x) + psi.value(y)) * (1.0 + 1e-12) + 1e-300);
            } else {
                CHECK(mid <= avg + 1e-9);
            }
        }
        // Strictness at fixed well-separated pairs.
        const double pairs[10][2] = {{0.1, 1.0}, {0.5, 2.0},  {1.0, 4.0},  {2.0, 16.0},
                                     {3.0, 30.0}, {5.0, 50.0}, {0.2, 20.0}, {1.0, 100.0},
                                     {10.0, 200.0}, {0.01, 0.5}};
        for (auto& pr : pairs) {
            const double m = psi.value(0.5 * (pr[0] + pr[1]));
            const double avg = 0.5 * (psi.value(pr[0]) + psi.value(pr[1]));
            if (std::isfinite(avg)) CHECK(m < avg);
        }
    }
}

TEST_CASE("complementary function: closed forms and brute force") {
    const auto p2 = OrliczFunction::power(2.0);
    CHECK(complementary(p2, 4.0) == doctest::Approx(4.0));
    CHECK(complementary(p2, 0.0) == 0.0);

    const auto e1 = OrliczFunction::exp_power(1.0, 1.0);
    const double oracle = conjugate_bruteforce(e1, 2.0);
    CHECK(oracle == doctest::Approx(2.0 * std::log(2.0) - 1.0).epsilon(1e-6));
    CHECK(complementary(e1, 2.0) == doctest::Approx(2.0 * std::log(2.0) - 1.0).epsilon(1e-9));
    // y below psi'(0+) = 1: supremum is attained at x = 0.
    CHECK(complementary(e1, 0.5) == 0.0);

    for (const auto& psi : catalog()) {
        for (double y : {0.7, 2.0, 5.0}) {
            CHECK(complementary(psi, y) == doctest::Approx(conjugate_bruteforce(psi, y))
                                               .epsilon(1e-5)
                                               .scale(1.0));
        }
    }
}

TEST_CASE("Young inequality x y <= psi(x) + conj(y)") {
    for (const auto& psi : catalog()) {
        const auto xs = log_spaced_grid(1e-3, 1e3, 50);
        for (double y : xs) {
            const double phi = complementary(psi, y);
            for (double x : xs) {
                const double lhs = x * y;
                const double rhs = psi.value(x) + phi;
                if (std::isfinite(rhs)) CHECK(lhs <= rhs * (1.0 + 1e-9) + 1e-12);
            }
        }
    }
}

TEST_CASE("delta2 verdicts") {
    const auto v_cube = check_delta2(OrliczFunction::power(3.0));
    REQUIRE(v_cube.satisfied());
    CHECK(v_cube.constants.at("K") == doctest::Approx(8.0).epsilon(1e-9));

    const auto v_exp = check_delta2(OrliczFunction::exp_power(1.0, 1.0));
    CHECK(v_exp.violated());
    CHECK(v_exp.witness_x.has_value());

    const auto v_plog = check_delta2(OrliczFunction::power_log(1.0, 2.0, 1.0));
    CHECK(v_plog.satisfied());

    CHECK(check_delta2(OrliczFunction::power(2.0)).satisfied());
}

TEST_CASE("nabla0 verdicts at beta = 2") {
    const auto v_p2 = check_nabla0(OrliczFunction::power(2.0), 2.0);
    REQUIRE(v_p2.satisfied());
    CHECK(v_p2.constants.at("C_beta") == doctest::Approx(1.0));

    CHECK(check_nabla0(OrliczFunction::exp_power(1.0, 1.0), 2.0).satisfied());
    CHECK(check_nabla0(OrliczFunction::exp_log_power(1.0, 2.0), 2.0).satisfied());
    CHECK(check_nabla0(OrliczFunction::power_log(1.0, 2.0, 1.0), 2.0).satisfied());
    CHECK_THROWS_AS(check_nabla0(OrliczFunction::power(2.0), 1.0), std::invalid_argument);
}

TEST_CASE("uniform nabla0 verdicts") {
    const auto v_p4 = check_uniform_nabla0(OrliczFunction::power(4.0));
    REQUIRE(v_p4.satisfied());
    CHECK(v_p4.constants.at("C") == doctest::Approx(1.0));

    CHECK(check_uniform_nabla0(OrliczFunction::exp_power(2.0, 1.0)).satisfied());
    CHECK(check_uniform_nabla0(OrliczFunction::exp_power(1.0, 1.0)).satisfied());
    CHECK(check_uniform_nabla0(OrliczFunction::power(2.0)).satisfied());
}

TEST_CASE("tabulated family mirrors its analytic source") {
    const auto src = OrliczFunction::exp_log_power(1.0, 2.0);
    std::vector<double> xs = log_spaced_grid(1e-2, 1e11, 400), ps;
    ps.reserve(xs.size());
    for (double x : xs) ps.push_back(src.value(x));
    const auto tab = OrliczFunction::tabulated(xs, ps);

    for (double x : log_spaced_grid(1.0, 1e8, 50))
        CHECK(tab.log_value(x) == doctest::Approx(src.log_value(x)).epsilon(1e-3));

    const auto v_analytic = check_uniform_nabla0(src);
    const auto v_tab = check_uniform_nabla0(tab);
    CHECK(v_tab.status == v_analytic.status);

    CHECK(check_delta_sq(tab).violated());
}

TEST_CASE("delta-squared verdicts") {
    const auto v_exp = check_delta_sq(OrliczFunction::exp_power(1.0, 1.0));
    REQUIRE(v_exp.satisfied());
    CHECK(v_exp.constants.at("C") == doctest::Approx(2.0));

    const auto v_p2 = check_delta_sq(OrliczFunction::power(2.0));
    CHECK(v_p2.violated());

    CHECK(check_delta_sq(OrliczFunction::exp_log_power(1.0, 2.0)).violated());
}

TEST_CASE("universal boundedness growth condition") {
    const auto any = OrliczFunction::power_log(1.0, 2.0, 1.0);
    const auto v_n1 = check_universal_boundedness_condition(any, 1, 0.0);
    REQUIRE(v_n1.satisfied());
    CHECK(v_n1.constants.at("exponent") == doctest::Approx(1.0));

    CHECK(check_universal_boundedness_condition(OrliczFunction::exp_power(1.0, 1.0), 2, 0.0)
              .satisfied());
    CHECK(check_universal_boundedness_condition(OrliczFunction::power(2.0), 2, 0.0).violated());
}

TEST_CASE("implication lattice between growth classes") {
    for (const auto& psi : catalog()) {
        const auto dsq = check_delta_sq(psi);
        if (dsq.satisfied()) {
            CHECK(check_uniform_nabla0(psi).satisfied());
        }
        const auto d2 = check_delta2(psi);
        if (d2.satisfied()) {
            // The reported K yields the power envelope psi(x) <= C x^p on the tail.
            const double K = d2.constants.at("K");
            const double x0 = d2.constants.at("x0");
            const double p = std::log2(K);
            const double logC = std::log(K) + psi.log_value(x0) - p * std::log(x0);
            for (double x : log_spaced_grid(x0, 1e8, 100))
                CHECK(psi.log_value(x) <= logC + p * std::log(x) + 1e-6);
        }
    }
}

TEST_CASE("verdict structure invariants") {
    for (const auto& psi : catalog()) {
        for (const auto& v : {check_delta2(psi), check_nabla0(psi, 2.0), check_delta_sq(psi),
                              check_uniform_nabla0(psi)}) {
            if (v.satisfied()) {
                CHECK(!v.constants.empty());
                CHECK(!v.witness_x.has_value());
            }
            if (v.violated()) {
                CHECK(v.constants.empty());
                CHECK(v.witness_x.has_value());
            }
        }
    }
}
