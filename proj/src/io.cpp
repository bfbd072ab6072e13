#include "borlicz/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace borlicz {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (...) {
        throw std::invalid_argument("cannot parse number '" + s + "' in " + what);
    }
}

// key=value,key=value into a map.
std::map<std::string, double> parse_kv(const std::string& body, const std::string& what) {
    std::map<std::string, double> out;
    for (const auto& part : split(body, ',')) {
        const auto kv = split(part, '=');
        if (kv.size() != 2) throw std::invalid_argument("expected key=value in " + what);
        out[trim(kv[0])] = parse_double(trim(kv[1]), what);
    }
    return out;
}

// "<re>+<im>i" or plain "<re>".
std::complex<double> parse_complex(const std::string& raw, const std::string& what) {
    std::string s = trim(raw);
    if (s.empty()) throw std::invalid_argument("empty complex literal in " + what);
    if (s.back() == 'i') {
        s.pop_back();
        // find the split sign after position 0
        size_t pos = std::string::npos;
        for (size_t i = 1; i < s.size(); ++i)
            if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') pos = i;
        if (pos == std::string::npos) return {0.0, parse_double(s, what)};
        const double re = parse_double(s.substr(0, pos), what);
        std::string im = s.substr(pos);
        if (im == "+" || im == "-") im += "1";
        return {re, parse_double(im, what)};
    }
    return {parse_double(s, what), 0.0};
}

} // namespace

OrliczFunction parse_psi_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string family = colon == std::string::npos ? spec : spec.substr(0, colon);
    const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);
    auto need = [&](const std::map<std::string, double>& kv, const char* k) {
        const auto it = kv.find(k);
        if (it == kv.end())
            throw std::invalid_argument("psi spec '" + spec + "' misses parameter " + k);
        return it->second;
    };
    if (family == "power") {
        const auto kv = parse_kv(body, spec);
        return OrliczFunction::power(need(kv, "p"));
    }
    if (family == "powerlog") {
        const auto kv = parse_kv(body, spec);
        return OrliczFunction::power_log(need(kv, "a"), need(kv, "p"), need(kv, "b"));
    }
    if (family == "exppower") {
        const auto kv = parse_kv(body, spec);
        return OrliczFunction::exp_power(need(kv, "a"), need(kv, "b"));
    }
    if (family == "explogpower") {
        const auto kv = parse_kv(body, spec);
        return OrliczFunction::exp_log_power(need(kv, "a"), need(kv, "b"));
    }
    if (family == "table") {
        std::ifstream is(body);
        if (!is) throw std::invalid_argument("cannot open table file '" + body + "'");
        std::vector<double> xs, ps;
        std::string line;
        while (std::getline(is, line)) {
            line = trim(line);
            if (line.empty() || line[0] == '#') continue;
            const auto cols = split(line, ',');
            if (cols.size() != 2)
                throw std::invalid_argument("table rows need two columns in " + body);
            xs.push_back(parse_double(trim(cols[0]), body));
            ps.push_back(parse_double(trim(cols[1]), body));
        }
        return OrliczFunction::tabulated(std::move(xs), std::move(ps));
    }
    throw std::invalid_argument("unknown psi family '" + family + "'");
}

SymbolMap parse_symbol_spec(const std::string& spec, int N) {
    const auto colon = spec.find(':');
    const std::string kind = colon == std::string::npos ? spec : spec.substr(0, colon);
    const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "id") return SymbolMap::identity(N);
    if (kind == "auto") {
        const auto kv = parse_kv(body, spec);
        const auto it = kv.find("a");
        if (it == kv.end()) throw std::invalid_argument("auto symbol needs a=");
        return SymbolMap::automorphism(BallPoint::axis(N, 0, it->second));
    }
    if (kind == "dilate") return SymbolMap::radial_dilation(N, parse_double(body, spec));
    if (kind == "const") {
        const auto parts = split(body, ',');
        if (static_cast<int>(parts.size()) != N)
            throw std::invalid_argument("const symbol needs N coordinates");
        std::array<std::complex<double>, BallPoint::kMaxDim> w{};
        for (int j = 0; j < N; ++j) w[static_cast<size_t>(j)] = parse_complex(parts[static_cast<size_t>(j)], spec);
        return SymbolMap::constant(
            BallPoint(std::span<const std::complex<double>>(w.data(), static_cast<size_t>(N))));
    }
    if (kind == "linear") {
        const auto parts = split(body, ',');
        if (static_cast<int>(parts.size()) != N * N)
            throw std::invalid_argument("linear symbol needs N*N entries");
        std::vector<std::complex<double>> mat;
        for (const auto& p : parts) mat.push_back(parse_complex(p, spec));
        return SymbolMap::linear(N, std::move(mat), "cli");
    }
    if (kind == "monomial") {
        // out:powers:coeff groups separated by ';', powers dot-separated.
        std::vector<MonomialTerm> terms;
        for (const auto& group : split(body, ';')) {
            const auto cols = split(group, ':');
            if (cols.size() != 3) throw std::invalid_argument("monomial term needs out:powers:coeff");
            MonomialTerm t;
            t.out = static_cast<int>(parse_double(trim(cols[0]), spec));
            const auto pows = split(cols[1], '.');
            if (static_cast<int>(pows.size()) > BallPoint::kMaxDim)
                throw std::invalid_argument("too many powers in monomial term");
            for (size_t j = 0; j < pows.size(); ++j)
                t.powers[j] = static_cast<int>(parse_double(trim(pows[j]), spec));
            t.coeff = parse_complex(cols[2], spec);
            terms.push_back(t);
        }
        return SymbolMap::monomial(N, std::move(terms), "cli");
    }
    throw std::invalid_argument("unknown symbol kind '" + kind + "'");
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open config '" + path + "'");
    ExperimentConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        " is not key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "N") cfg.N = static_cast<int>(parse_double(val, key));
        else if (key == "alpha") cfg.alpha = parse_double(val, key);
        else if (key == "psi") cfg.psi_specs.push_back(val);
        else if (key == "symbol") cfg.symbol_specs.push_back(val);
        else if (key == "j_min") cfg.j_min = static_cast<int>(parse_double(val, key));
        else if (key == "j_max") cfg.j_max = static_cast<int>(parse_double(val, key));
        else if (key == "xi_grid") cfg.xi_grid = static_cast<int>(parse_double(val, key));
        else if (key == "profile_samples")
            cfg.profile_samples = static_cast<int>(parse_double(val, key));
        else if (key == "norm_samples") cfg.norm_samples = static_cast<int>(parse_double(val, key));
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_double(val, key));
        else if (key == "out_dir") cfg.out_dir = val;
        else if (key == "cache_dir") cfg.cache_dir = val;
        else if (key == "bounded_factor") cfg.thresholds.bounded_factor = parse_double(val, key);
        else if (key == "decay_factor") cfg.thresholds.decay_factor = parse_double(val, key);
        else if (key == "flat_factor") cfg.thresholds.flat_factor = parse_double(val, key);
        else if (key == "resolve_rel") cfg.thresholds.resolve_rel = parse_double(val, key);
        else throw std::invalid_argument("unknown config key '" + key + "'");
    }
    return cfg;
}

std::string sanitize_filename(const std::string& raw) {
    std::string out;
    for (char c : raw) {
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
            c == '.' || c == '-' || c == '_')
            out += c;
        else
            out += '_';
    }
    return out;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open " + tmp);
        os << content;
    }
    std::filesystem::rename(tmp, path);
}

void write_json_atomic(const std::string& path, const ordered_json& j) {
    write_text_atomic(path, j.dump(2) + "\n");
}

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string profile_csv(const CarlesonProfile& p) {
    std::ostringstream os;
    os << "# schema=borlicz.profile.v1\n";
    os << "# measure=" << p.measure_id << " N=" << p.N << " alpha=" << p.alpha
       << " windows=" << (p.s_balls ? "S" : "W") << " samples=" << p.n_samples
       << " xi_grid=" << p.xi_grid_size << "\n";
    os << "h,rho,rho_stderr,K,bound_candidate\n";
    for (size_t j = 0; j < p.h.size(); ++j) {
        const double q = p.rho[j] / std::pow(p.h[j], p.exponent());
        os << num(p.h[j]) << ',' << num(p.rho[j]) << ',' << num(p.rho_stderr[j]) << ','
           << num(p.k[j]) << ',' << num(q) << "\n";
    }
    return os.str();
}

std::string embedding_csv(const EmbeddingReport& r) {
    std::ostringstream os;
    os << "# schema=borlicz.embed.v1\n";
    os << "# measure=" << r.measure_id << " psi1=" << r.psi1_id << " psi2=" << r.psi2_id
       << " N=" << r.N << " alpha=" << r.alpha << "\n";
    os << "A,h,log10_ratio_rho,log10_ratio_k,rel_stderr\n";
    constexpr double kLn10 = 2.302585092994046;
    for (size_t ia = 0; ia < r.a_grid.size(); ++ia) {
        for (size_t j = 0; j < r.h.size(); ++j) {
            os << num(r.a_grid[ia]) << ',' << num(r.h[j]) << ','
               << num(r.log_ratio_rho[ia][j] / kLn10) << ',' << num(r.log_ratio_k[ia][j] / kLn10)
               << ',' << num(r.rel_stderr[j]) << "\n";
        }
    }
    return os.str();
}

ordered_json verdict_json(const ConditionVerdict& v) {
    ordered_json j;
    j["status"] = to_string(v.status);
    if (!v.constants.empty()) j["constants"] = v.constants;
    if (v.witness_x) j["witness_x"] = *v.witness_x;
    if (v.witness_y) j["witness_y"] = *v.witness_y;
    j["range"] = {v.range_lo, v.range_hi};
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

ordered_json classification_json(const CarlesonClassification& c) {
    ordered_json j;
    j["headline"] = to_string(c.headline);
    j["alpha_carleson"] = c.alpha_carleson;
    j["psi_alpha"] = c.psi_alpha;
    j["vanishing"] = c.vanishing;
    j["alpha_verdict"] = verdict_json(c.alpha_verdict);
    j["psi_alpha_verdict"] = verdict_json(c.psi_alpha_verdict);
    j["vanishing_verdict"] = verdict_json(c.vanishing_verdict);
    return j;
}

ordered_json composition_json(const CompositionVerdict& v) {
    ordered_json j;
    j["schema"] = "borlicz.composition.v1";
    j["symbol"] = v.symbol_id;
    j["psi"] = v.psi_id;
    j["N"] = v.N;
    j["alpha"] = v.alpha;
    j["boundedness"] = verdict_json(v.boundedness);
    j["compactness"] = verdict_json(v.compactness);
    j["rho_bounded"] = to_string(v.embedding.rho_bounded.status);
    j["k_bounded"] = to_string(v.embedding.k_bounded.status);
    j["rho_vanishing"] = to_string(v.embedding.rho_vanishing.status);
    j["k_vanishing"] = to_string(v.embedding.k_vanishing.status);
    j["carleson"] = classification_json(v.classes);
    j["window_decay"] = {{"slope", v.window_decay.slope},
                         {"K", v.window_decay.k_constant},
                         {"vacuous", v.window_decay.vacuous},
                         {"verdict", verdict_json(v.window_decay.verdict)}};
    j["direct_norm_ratio"] = v.direct_norm_ratio;
    j["applicability"] = v.applicability_note;
    j["trend_slope_rho"] = v.embedding.trend_slope_rho;
    j["trend_slope_k"] = v.embedding.trend_slope_k;
    return j;
}

ordered_json survey_json(const SurveySummary& s) {
    ordered_json j;
    j["schema"] = "borlicz.survey.v1";
    j["psi"] = s.psi_id;
    j["N"] = s.N;
    j["alpha"] = s.alpha;
    j["psi_classes"] = {{"delta2", verdict_json(s.psi_delta2)},
                        {"delta_squared", verdict_json(s.psi_delta_sq)},
                        {"nabla0", verdict_json(s.psi_nabla0)},
                        {"uniform_nabla0", verdict_json(s.psi_uniform_nabla0)},
                        {"universal_growth", verdict_json(s.psi_universal_growth)}};
    j["universal_expected"] = s.universal_expected;
    j["contradiction"] = s.contradiction;
    j["violated_symbols"] = s.violated_symbols;
    j["inconclusive_count"] = s.inconclusive_count;
    ordered_json arr = ordered_json::array();
    for (const auto& v : s.symbols) {
        ordered_json e;
        e["symbol"] = v.symbol_id;
        e["boundedness"] = to_string(v.boundedness.status);
        e["compactness"] = to_string(v.compactness.status);
        e["carleson"] = to_string(v.classes.headline);
        e["direct_norm_ratio"] = v.direct_norm_ratio;
        arr.push_back(e);
    }
    j["symbols"] = arr;
    return j;
}

Measure cached_pullback(const SymbolMap& phi, double alpha, int sample_count,
                        std::uint64_t seed, const std::string& cache_dir) {
    char abuf[40];
    std::snprintf(abuf, sizeof(abuf), "%g", alpha);
    const std::string id = "pullback:" + phi.id() + ",N=" + std::to_string(phi.dim()) + ",a=" +
                           abuf + ",n=" + std::to_string(sample_count) +
                           ",s=" + std::to_string(seed);
    if (cache_dir.empty()) return Measure::pullback(phi, alpha, sample_count, seed);
    std::filesystem::create_directories(cache_dir);
    const std::string path = cache_dir + "/" + sanitize_filename(id) + ".bin";
    if (auto cached = load_sample_set(path)) {
        if (cached->N == phi.dim() && cached->size() == static_cast<size_t>(sample_count))
            return Measure::from_realization(std::move(*cached), id, alpha,
                                             std::max(0.0, 1.0 - phi.sup_norm_bound()));
    }
    Measure m = Measure::pullback(phi, alpha, sample_count, seed);
    save_sample_set(*m.samples(), path);
    return m;
}

} // namespace borlicz
