// Experiment runner: growth-class verdicts for Orlicz functions, Carleson
// window profiles of measures on the complex ball, embedding checks and
// composition-operator surveys. Every output is a pure function of the
// configuration and seed.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "borlicz/embedding.hpp"
#include "borlicz/errors.hpp"
#include "borlicz/io.hpp"

namespace fs = std::filesystem;
using namespace borlicz;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInconclusive = 3;
constexpr int kExitContradiction = 4;

struct Cli {
    ExperimentConfig cfg;
    std::string psi1_spec, psi2_spec;
    std::string symbol_spec;
    bool use_valpha = false;
    bool s_balls = false;
    std::string report_dir;
};

Measure make_measure(const Cli& cli) {
    if (cli.use_valpha) return Measure::weighted_volume(cli.cfg.N, cli.cfg.alpha);
    if (cli.symbol_spec.empty())
        throw std::invalid_argument("need --symbol <spec> or --valpha");
    const SymbolMap phi = parse_symbol_spec(cli.symbol_spec, cli.cfg.N);
    return cached_pullback(phi, cli.cfg.alpha, cli.cfg.profile_samples, cli.cfg.seed,
                           cli.cfg.cache_dir);
}

CarlesonProfile make_profile(const Cli& cli, const Measure& mu) {
    ProfileOptions opt;
    opt.xi_grid_size = cli.cfg.xi_grid;
    opt.mc_count = cli.cfg.profile_samples;
    opt.s_balls = cli.s_balls;
    return carleson_profile(mu, cli.cfg.alpha, dyadic_h_grid(cli.cfg.j_min, cli.cfg.j_max),
                            cli.cfg.seed + 1, opt);
}

CompositionOptions make_composition_options(const Cli& cli) {
    CompositionOptions opt;
    opt.profile_samples = cli.cfg.profile_samples;
    opt.direct_samples = cli.cfg.norm_samples;
    opt.j_min = cli.cfg.j_min;
    opt.j_max = cli.cfg.j_max;
    opt.thresholds = cli.cfg.thresholds;
    opt.seed = cli.cfg.seed;
    return opt;
}

int cmd_classify(const Cli& cli) {
    fs::create_directories(cli.cfg.out_dir);
    bool any_decided = false;
    for (const auto& spec : cli.cfg.psi_specs) {
        const OrliczFunction psi = parse_psi_spec(spec);
        ordered_json j;
        j["schema"] = "borlicz.classify.v1";
        j["psi"] = psi.id();
        const auto d2 = check_delta2(psi);
        const auto n0 = check_nabla0(psi, 2.0);
        const auto un = check_uniform_nabla0(psi);
        const auto dsq = check_delta_sq(psi);
        const auto ug = check_universal_boundedness_condition(psi, cli.cfg.N, cli.cfg.alpha);
        j["delta2"] = verdict_json(d2);
        j["nabla0"] = verdict_json(n0);
        j["uniform_nabla0"] = verdict_json(un);
        j["delta_squared"] = verdict_json(dsq);
        j["universal_growth"] = verdict_json(ug);
        j["universal_growth_N"] = cli.cfg.N;
        j["universal_growth_alpha"] = cli.cfg.alpha;
        for (const auto* v : {&d2, &n0, &un, &dsq, &ug})
            if (!v->inconclusive()) any_decided = true;
        write_json_atomic(cli.cfg.out_dir + "/classify_" + sanitize_filename(psi.id()) + ".json",
                          j);
    }
    return any_decided ? kExitOk : kExitInconclusive;
}

int cmd_profile(const Cli& cli) {
    fs::create_directories(cli.cfg.out_dir);
    const Measure mu = make_measure(cli);
    const auto prof = make_profile(cli, mu);
    const std::string stem = sanitize_filename(mu.id()) + (cli.s_balls ? "_S" : "");
    write_text_atomic(cli.cfg.out_dir + "/profile_" + stem + ".csv", profile_csv(prof));
    return kExitOk;
}

int cmd_embed_check(const Cli& cli) {
    fs::create_directories(cli.cfg.out_dir);
    const OrliczFunction psi1 = parse_psi_spec(cli.psi1_spec);
    const OrliczFunction psi2 =
        cli.psi2_spec.empty() ? psi1 : parse_psi_spec(cli.psi2_spec);
    const Measure mu = make_measure(cli);
    const auto prof = make_profile(cli, mu);
    const auto rep = check_embedding(prof, psi1, psi2, {}, cli.cfg.thresholds);
    const std::string stem = sanitize_filename(mu.id() + "_" + psi1.id() + "_" + psi2.id());
    write_text_atomic(cli.cfg.out_dir + "/embed_" + stem + ".csv", embedding_csv(rep));
    ordered_json j;
    j["schema"] = "borlicz.embed.v1";
    j["measure"] = mu.id();
    j["psi1"] = psi1.id();
    j["psi2"] = psi2.id();
    j["rho_bounded"] = verdict_json(rep.rho_bounded);
    j["k_bounded"] = verdict_json(rep.k_bounded);
    j["rho_vanishing"] = verdict_json(rep.rho_vanishing);
    j["k_vanishing"] = verdict_json(rep.k_vanishing);
    j["trend_slope_rho"] = rep.trend_slope_rho;
    j["trend_slope_k"] = rep.trend_slope_k;
    write_json_atomic(cli.cfg.out_dir + "/embed_" + stem + ".json", j);
    return kExitOk;
}

int cmd_composition(const Cli& cli) {
    fs::create_directories(cli.cfg.out_dir);
    const OrliczFunction psi = parse_psi_spec(cli.psi1_spec);
    const SymbolMap phi = parse_symbol_spec(cli.symbol_spec, cli.cfg.N);
    const auto rep = composition_report(phi, psi, cli.cfg.alpha, make_composition_options(cli));
    const std::string stem = sanitize_filename(phi.id() + "_" + psi.id());
    write_json_atomic(cli.cfg.out_dir + "/comp_" + stem + ".json", composition_json(rep));
    write_text_atomic(cli.cfg.out_dir + "/embed_" + stem + ".csv", embedding_csv(rep.embedding));
    // Emit the window profile alongside (same construction seed, same bytes).
    const Measure mu = cached_pullback(phi, cli.cfg.alpha, cli.cfg.profile_samples, cli.cfg.seed,
                                       cli.cfg.cache_dir);
    ProfileOptions popt;
    popt.mc_count = cli.cfg.profile_samples;
    const auto prof = carleson_profile(mu, cli.cfg.alpha,
                                       dyadic_h_grid(cli.cfg.j_min, cli.cfg.j_max),
                                       cli.cfg.seed + 1, popt);
    write_text_atomic(cli.cfg.out_dir + "/profile_" + sanitize_filename(mu.id()) + ".csv",
                      profile_csv(prof));
    return kExitOk;
}

int cmd_survey(const Cli& cli) {
    fs::create_directories(cli.cfg.out_dir);
    int worst = kExitOk;
    for (const auto& spec : cli.cfg.psi_specs) {
        const OrliczFunction psi = parse_psi_spec(spec);
        const auto summary =
            universal_boundedness_survey(psi, cli.cfg.alpha, cli.cfg.N,
                                         make_composition_options(cli));
        const std::string stem =
            sanitize_filename(psi.id()) + "_N" + std::to_string(cli.cfg.N);
        write_json_atomic(cli.cfg.out_dir + "/survey_" + stem + ".json", survey_json(summary));
        for (const auto& sym : summary.symbols) {
            write_json_atomic(cli.cfg.out_dir + "/comp_" +
                                  sanitize_filename(sym.symbol_id + "_" + psi.id()) + "_N" +
                                  std::to_string(cli.cfg.N) + ".json",
                              composition_json(sym));
        }
        if (summary.contradiction) worst = kExitContradiction;
    }
    return worst;
}

int cmd_emit_plots(const Cli& cli) {
    const fs::path dir = cli.report_dir.empty() ? cli.cfg.out_dir : cli.report_dir;
    if (!fs::is_directory(dir)) {
        std::cerr << "report directory not found: " << dir << "\n";
        return kExitUsage;
    }
    const fs::path plots = dir / "plots";
    int emitted = 0;
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        return std::string(buf);
    };
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (entry.path().extension() != ".csv") continue;
        std::ifstream is(entry.path());
        std::string line;
        std::vector<std::vector<double>> rows;
        std::string schema;
        while (std::getline(is, line)) {
            if (line.rfind("# schema=", 0) == 0) schema = line.substr(9);
            if (line.empty() || line[0] == '#' || std::isalpha(line[0])) continue;
            std::vector<double> row;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) row.push_back(std::atof(cell.c_str()));
            rows.push_back(row);
        }
        if (rows.empty()) continue;
        fs::create_directories(plots);
        std::ostringstream os;
        if (schema.rfind("borlicz.profile", 0) == 0) {
            os << "# log10(h)  log10(rho)  slope\n";
            std::vector<std::pair<double, double>> pts;
            for (const auto& r : rows)
                if (r.size() >= 2 && r[1] > 0.0)
                    pts.emplace_back(std::log10(r[0]), std::log10(r[1]));
            for (size_t i = 0; i < pts.size(); ++i) {
                double slope = 0.0;
                if (i + 1 < pts.size())
                    slope = (pts[i + 1].second - pts[i].second) /
                            (pts[i + 1].first - pts[i].first);
                else if (i > 0)
                    slope = (pts[i].second - pts[i - 1].second) /
                            (pts[i].first - pts[i - 1].first);
                os << num(pts[i].first) << "  " << num(pts[i].second) << "  " << num(slope)
                   << "\n";
            }
            write_text_atomic((plots / (entry.path().stem().string() + "_rho.dat")).string(),
                              os.str());
            ++emitted;
        } else if (schema.rfind("borlicz.embed", 0) == 0) {
            // Rows are (A, h, log10 rho-ratio, log10 K-ratio, rel); keep A
            // nearest one.
            double best_a = 0.0;
            for (const auto& r : rows)
                if (r.size() >= 3 &&
                    std::abs(std::log10(r[0])) < std::abs(std::log10(best_a == 0.0 ? 1e9 : best_a)))
                    best_a = r[0];
            os << "# log10(h)  log10(ratio_rho)  log10(ratio_k)   [A=" << num(best_a) << "]\n";
            for (const auto& r : rows) {
                if (r.size() < 4 || r[0] != best_a) continue;
                if (!std::isfinite(r[2]) && !std::isfinite(r[3])) continue;
                os << num(std::log10(r[1])) << "  " << num(r[2]) << "  " << num(r[3]) << "\n";
            }
            write_text_atomic((plots / (entry.path().stem().string() + "_ratio.dat")).string(),
                              os.str());
            ++emitted;
        }
    }
    if (emitted == 0) {
        std::cerr << "no profile or embedding reports in " << dir << "\n";
        return kExitUsage;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    Cli cli;
    // Config file first; explicit flags override its values.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                cli.cfg = load_config(argv[i + 1]);
            } catch (const std::exception& e) {
                std::cerr << "config error: " << e.what() << "\n";
                return kExitUsage;
            }
        }
    }

    CLI::App app{"numerical laboratory for Bergman-Orlicz spaces on the complex ball"};
    app.require_subcommand(1);
    std::string config_dummy;
    app.add_option("--config", config_dummy, "flat key=value configuration file");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_dummy);
        sub->add_option("--N", cli.cfg.N, "complex dimension (1..3)");
        sub->add_option("--alpha", cli.cfg.alpha, "weight exponent, > -1");
        sub->add_option("--jmin", cli.cfg.j_min);
        sub->add_option("--jmax", cli.cfg.j_max);
        sub->add_option("--xi-grid", cli.cfg.xi_grid);
        sub->add_option("--samples", cli.cfg.profile_samples, "profile sample count");
        sub->add_option("--norm-samples", cli.cfg.norm_samples);
        sub->add_option("--seed", cli.cfg.seed);
        sub->add_option("--out", cli.cfg.out_dir, "output directory");
        sub->add_option("--cache-dir", cli.cfg.cache_dir);
    };

    auto* classify = app.add_subcommand("classify", "growth-class verdicts for Orlicz functions");
    add_common(classify);
    classify->add_option("--psi", cli.cfg.psi_specs, "family spec, repeatable");

    auto* profile = app.add_subcommand("profile", "Carleson window profile of a measure");
    add_common(profile);
    profile->add_option("--symbol", cli.symbol_spec, "pull-back symbol spec");
    profile->add_flag("--valpha", cli.use_valpha, "profile the weighted volume itself");
    profile->add_flag("--sballs", cli.s_balls, "use non-isotropic balls instead of windows");

    auto* embed = app.add_subcommand("embed-check", "embedding criteria for a measure");
    add_common(embed);
    embed->add_option("--psi1", cli.psi1_spec)->required();
    embed->add_option("--psi2", cli.psi2_spec);
    embed->add_option("--symbol", cli.symbol_spec);
    embed->add_flag("--valpha", cli.use_valpha);

    auto* comp = app.add_subcommand("composition", "composition-operator verdict for one symbol");
    add_common(comp);
    comp->add_option("--psi", cli.psi1_spec)->required();
    comp->add_option("--symbol", cli.symbol_spec)->required();

    auto* survey = app.add_subcommand("survey", "full-catalog composition survey");
    add_common(survey);
    survey->add_option("--psi", cli.cfg.psi_specs, "family spec, repeatable");

    auto* plots = app.add_subcommand("emit-plots", "two-column plot data from reports");
    plots->add_option("--report-dir", cli.report_dir)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (classify->parsed()) {
            if (cli.cfg.psi_specs.empty()) {
                std::cerr << "classify needs at least one --psi\n";
                return kExitUsage;
            }
            return cmd_classify(cli);
        }
        if (profile->parsed()) return cmd_profile(cli);
        if (embed->parsed()) return cmd_embed_check(cli);
        if (comp->parsed()) return cmd_composition(cli);
        if (survey->parsed()) {
            if (cli.cfg.psi_specs.empty()) {
                std::cerr << "survey needs at least one --psi\n";
                return kExitUsage;
            }
            return cmd_survey(cli);
        }
        if (plots->parsed()) return cmd_emit_plots(cli);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
