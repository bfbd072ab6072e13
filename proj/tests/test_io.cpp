#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "borlicz/io.hpp"

using namespace borlicz;

TEST_CASE("psi spec grammar") {
    CHECK(parse_psi_spec("power:p=2").id() == "power:p=2");
    CHECK(parse_psi_spec("powerlog:a=1,p=2,b=1").family() == PsiFamily::PowerLog);
    CHECK(parse_psi_spec("exppower:a=1,b=1").value(std::log(2.0)) == doctest::Approx(1.0));
    CHECK(parse_psi_spec("explogpower:a=1,b=2").family() == PsiFamily::ExpLogPower);
    CHECK_THROWS_AS(parse_psi_spec("power:q=2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_psi_spec("nosuch:p=2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_psi_spec("power:p=abc"), std::invalid_argument);

    // Tabulated family from a CSV file.
    {
        std::ofstream os("psi_table.csv");
        os.precision(17);
        os << "# x,psi\n";
        const auto src = OrliczFunction::power(3.0);
        for (double x : log_spaced_grid(1e-3, 1e9, 50)) os << x << "," << src.value(x) << "\n";
    }
    const auto tab = parse_psi_spec("table:psi_table.csv");
    CHECK(tab.family() == PsiFamily::Tabulated);
    CHECK(tab.value(10.0) == doctest::Approx(1000.0).epsilon(1e-6));
    std::remove("psi_table.csv");
    CHECK_THROWS_AS(parse_psi_spec("table:missing_file.csv"), std::invalid_argument);
}

TEST_CASE("symbol spec grammar") {
    CHECK(parse_symbol_spec("id", 2).kind() == SymbolMap::Kind::Identity);
    CHECK(parse_symbol_spec("auto:a=0.7", 1).kind() == SymbolMap::Kind::Automorphism);
    CHECK(parse_symbol_spec("dilate:0.9", 3).kind() == SymbolMap::Kind::RadialDilation);
    const auto c = parse_symbol_spec("const:0.2+0i,0.1i", 2);
    CHECK(c.kind() == SymbolMap::Kind::Constant);
    const auto w = c.eval(BallPoint::zero(2));
    CHECK(w.coord(0).real() == doctest::Approx(0.2));
    CHECK(w.coord(1).imag() == doctest::Approx(0.1));
    const auto lin = parse_symbol_spec("linear:0.5,0,0,0.5i", 2);
    CHECK(lin.kind() == SymbolMap::Kind::Linear);
    const auto mono = parse_symbol_spec("monomial:0:2:0.5;1:0.2:0.25+0.25i", 2);
    CHECK(mono.kind() == SymbolMap::Kind::Monomial);
    CHECK_THROWS_AS(parse_symbol_spec("auto:b=1", 1), std::invalid_argument);
    CHECK_THROWS_AS(parse_symbol_spec("linear:1,2", 2), std::invalid_argument);
    CHECK_THROWS_AS(parse_symbol_spec("wat", 1), std::invalid_argument);
}

TEST_CASE("config file round trip") {
    {
        std::ofstream os("exp.cfg");
        os << "# comment line\n";
        os << "N = 2\n";
        os << "alpha = 1.5\n";
        os << "psi = exppower:a=1,b=1\n";
        os << "psi = power:p=2\n";
        os << "symbol = auto:a=0.7\n";
        os << "j_max = 10\n";
        os << "profile_samples = 12345\n";
        os << "seed = 99\n";
        os << "out_dir = results\n";
    }
    const auto cfg = load_config("exp.cfg");
    CHECK(cfg.N == 2);
    CHECK(cfg.alpha == doctest::Approx(1.5));
    REQUIRE(cfg.psi_specs.size() == 2);
    CHECK(cfg.psi_specs[1] == "power:p=2");
    CHECK(cfg.symbol_specs.size() == 1);
    CHECK(cfg.j_max == 10);
    CHECK(cfg.profile_samples == 12345);
    CHECK(cfg.seed == 99);
    CHECK(cfg.out_dir == "results");
    std::remove("exp.cfg");

    {
        std::ofstream os("bad.cfg");
        os << "nonsense\n";
    }
    CHECK_THROWS_AS(load_config("bad.cfg"), std::invalid_argument);
    std::remove("bad.cfg");
    CHECK_THROWS_AS(load_config("missing.cfg"), std::invalid_argument);
}

TEST_CASE("csv and json exports carry schema versions and are deterministic") {
    const auto v = Measure::weighted_volume(1, 0.0);
    const auto prof1 = carleson_profile(v, 0.0, dyadic_h_grid(1, 5), 7, {.mc_count = 20000});
    const auto prof2 = carleson_profile(v, 0.0, dyadic_h_grid(1, 5), 7, {.mc_count = 20000});
    const auto csv1 = profile_csv(prof1);
    CHECK(csv1 == profile_csv(prof2));
    CHECK(csv1.rfind("# schema=borlicz.profile.v1", 0) == 0);

    const auto psi = OrliczFunction::power(2.0);
    const auto rep = check_embedding(prof1, psi, psi);
    const auto ecsv = embedding_csv(rep);
    CHECK(ecsv.rfind("# schema=borlicz.embed.v1", 0) == 0);
    CHECK(ecsv.find("log10_ratio_rho") != std::string::npos);

    ordered_json vj = verdict_json(rep.rho_bounded);
    CHECK(vj.contains("status"));
}

TEST_CASE("atomic writers produce the final file only") {
    write_text_atomic("atomic_test.txt", "hello\n");
    std::ifstream is("atomic_test.txt");
    std::string s;
    std::getline(is, s);
    CHECK(s == "hello");
    CHECK_FALSE(std::filesystem::exists("atomic_test.txt.tmp"));
    std::remove("atomic_test.txt");
}

TEST_CASE("pull-back cache reuses the realization byte for byte") {
    const auto phi = SymbolMap::radial_dilation(2, 0.9);
    std::filesystem::remove_all("cachedir_test");
    const auto m1 = cached_pullback(phi, 0.0, 5000, 11, "cachedir_test");
    const auto m2 = cached_pullback(phi, 0.0, 5000, 11, "cachedir_test");
    REQUIRE(m1.samples() != nullptr);
    REQUIRE(m2.samples() != nullptr);
    REQUIRE(m1.samples()->size() == m2.samples()->size());
    for (size_t i = 0; i < m1.samples()->coords.size(); ++i)
        CHECK(m1.samples()->coords[i] == m2.samples()->coords[i]);
    CHECK(m1.id() == m2.id());
    std::filesystem::remove_all("cachedir_test");
}
