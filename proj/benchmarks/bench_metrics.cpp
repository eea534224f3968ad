// Throughput of the measurement pipeline on the shipped corpus: line
// classification, tokenizing, whole-file analysis, and version diffs.
#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>
#include <string>

#include "hybridsim/metrics/diff.hpp"
#include "hybridsim/metrics/halstead.hpp"
#include "hybridsim/metrics/lines.hpp"
#include "hybridsim/metrics/report.hpp"
#include "hybridsim/metrics/tokens.hpp"

using namespace hybridsim::metrics;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string corpus_text() {
    std::string text;
    for (const char* rel : {"/components/heater.model", "/components/room.model",
                            "/components/mediator.model", "/case0.model",
                            "/case1.model", "/case2.model", "/case0a.model",
                            "/case1a.model", "/case2a.model"})
        text += read_file(std::string(HYBRIDSIM_CASES_DIR) + rel);
    return text;
}

void BM_ClassifyLines(benchmark::State& state) {
    const auto profile = model_dsl_profile();
    const auto text = corpus_text();
    for (auto _ : state) {
        auto counts = classify_lines(text, profile);
        benchmark::DoNotOptimize(counts.code);
    }
    state.SetBytesProcessed(state.iterations()
                            * static_cast<long long>(text.size()));
}
BENCHMARK(BM_ClassifyLines);

void BM_Tokenize(benchmark::State& state) {
    const auto profile = model_dsl_profile();
    const auto text = corpus_text();
    for (auto _ : state) {
        auto tokens = tokenize(text, profile);
        benchmark::DoNotOptimize(tokens.size());
    }
    state.SetBytesProcessed(state.iterations()
                            * static_cast<long long>(text.size()));
}
BENCHMARK(BM_Tokenize);

void BM_AnalyzeText(benchmark::State& state) {
    const auto profile = model_dsl_profile();
    const auto text = corpus_text();
    for (auto _ : state) {
        auto analysis = analyze_text(text, profile);
        benchmark::DoNotOptimize(analysis.units.size());
    }
    state.SetBytesProcessed(state.iterations()
                            * static_cast<long long>(text.size()));
}
BENCHMARK(BM_AnalyzeText);

void BM_DiffVersions(benchmark::State& state) {
    const auto profile = model_dsl_profile();
    const auto old_text = read_file(std::string(HYBRIDSIM_CASES_DIR) + "/case1.model");
    const auto new_text = read_file(std::string(HYBRIDSIM_CASES_DIR) + "/case2.model");
    for (auto _ : state) {
        auto counts = diff_versions(old_text, new_text, profile);
        benchmark::DoNotOptimize(counts.changed());
    }
}
BENCHMARK(BM_DiffVersions);

}  // namespace

BENCHMARK_MAIN();
