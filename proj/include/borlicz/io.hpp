#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "borlicz/embedding.hpp"
#include "borlicz/measure.hpp"
#include "borlicz/orlicz.hpp"
#include "borlicz/symbols.hpp"

namespace borlicz {

using ordered_json = nlohmann::ordered_json;

// Family grammar: power:p=2 | powerlog:a=1,p=2,b=1 | exppower:a=1,b=1 |
// explogpower:a=1,b=2 | table:<path to two-column x,psi CSV>.
OrliczFunction parse_psi_spec(const std::string& spec);

// Symbol grammar: id | const:<re>+<im>i,... | auto:a=0.7 | dilate:0.9 |
// linear:<N*N complex entries, row-major, comma separated> |
// monomial:<out>:<p1>[.<p2>[.<p3>]]:<re>+<im>i[;...].
SymbolMap parse_symbol_spec(const std::string& spec, int N);

// Flat key=value experiment configuration; '#' starts a comment line.
struct ExperimentConfig {
    int N = 1;
    double alpha = 0.0;
    std::vector<std::string> psi_specs;
    std::vector<std::string> symbol_specs; // empty: the built-in catalog
    int j_min = 1;
    int j_max = 12;
    int xi_grid = 0; // 0: dimension default
    int profile_samples = 100000;
    int norm_samples = 20000;
    std::uint64_t seed = 20250808;
    std::string out_dir = "out";
    std::string cache_dir; // optional binary cache for pull-back samples
    TrendThresholds thresholds;
};

ExperimentConfig load_config(const std::string& path);

std::string sanitize_filename(const std::string& raw);

void write_text_atomic(const std::string& path, const std::string& content);
void write_json_atomic(const std::string& path, const ordered_json& j);

std::string profile_csv(const CarlesonProfile& p);
std::string embedding_csv(const EmbeddingReport& r);

ordered_json verdict_json(const ConditionVerdict& v);
ordered_json classification_json(const CarlesonClassification& c);
ordered_json composition_json(const CompositionVerdict& v);
ordered_json survey_json(const SurveySummary& s);

// Pull-back measure with optional binary caching keyed by the construction
// inputs; an empty cache_dir just builds.
Measure cached_pullback(const SymbolMap& phi, double alpha, int sample_count,
                        std::uint64_t seed, const std::string& cache_dir);

} // namespace borlicz
