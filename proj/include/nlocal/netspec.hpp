#pragma once

#include <optional>
#include <string>

#include "nlocal/oracle.hpp"

namespace nlocal {

/// Parsed network description file: topology, optional convention, and one
/// state spec per source. The on-disk format is JSON with named fields,
/// complex numbers as [re, im] pairs and matrices as flat row-major arrays.
struct NetworkSpec {
    Topology topology = Topology::chain;
    Convention convention = Convention::normalized;
    std::vector<StateSpec> sources;
};

NetworkSpec parse_network_spec(const std::string& json_text); // throws InputError
NetworkSpec load_network_spec(const std::string& path);

/// Sweep description: a network spec in which one scalar parameter carries
/// the string marker "sweep" (the marker may appear in several slots, which
/// all receive the same value), plus a range block {lo, hi, step}.
struct SweepRange {
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.0;
};

struct SweepSpec {
    std::string template_json;
    SweepRange range;
    int marker_count = 0;
};

SweepSpec parse_sweep_spec(const std::string& json_text);
SweepSpec load_sweep_spec(const std::string& path);
NetworkSpec instantiate(const SweepSpec& spec, double value);
std::vector<double> sweep_grid(const SweepRange& range);

// ---------------------------------------------------------------------------
// Analysis driver shared by the CLI and the test suites.

struct AnalyzeOptions {
    bool oracle = false;
    bool align = false;
    std::optional<Convention> convention_override;
    OptimizerConfig optimizer;
};

struct OracleOutcome {
    double value = 0.0;
    double gap = 0.0; // closed_form_max - value
    bool converged = false;
    int iterations = 0;
    std::variant<ChainSettings, StarSettings> settings;
};

struct AnalysisResult {
    NetworkSpec spec; // sources as analyzed (aligned when requested)
    ViolationReport report;
    std::optional<CauchySchwarzCheck> cs_pair;  // chains with two sources
    std::optional<CauchySchwarzCheck> cs_chain; // chains with three or more
    std::optional<OracleOutcome> oracle;
    bool oracle_exceeds_closed_form = false; // oracle > closed form + 1e-6
};

AnalysisResult analyze(const NetworkSpec& spec, const AnalyzeOptions& options);

std::string render_text_report(const AnalysisResult& result);
/// Self-describing JSON: carries the input fields, so the output can be fed
/// back to analyze and reproduces the same results.
std::string render_json_report(const AnalysisResult& result);

struct SweepRow {
    double param = 0.0;
    double closed_form = 0.0;
    double bound = 0.0;
    bool violation = false;
    std::optional<double> oracle;
};

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const AnalyzeOptions& options);
/// Fixed header param,closed_form,bound,violation[,oracle]; byte-stable for
/// fixed inputs and seed.
std::string sweep_csv(const std::vector<SweepRow>& rows);

} // namespace nlocal
