#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ncsched/analytics.hpp"
#include "ncsched/config.hpp"
#include "ncsched/metrics.hpp"

namespace ncsched {

struct SweepSpec {
    std::string parameter;  // numeric scenario field: N, lambda, pbd, T, W,
                            // s, q, H, horizon, warmup, replications
    std::vector<double> values;
};

/// A batch of simulation cells: one base configuration, a list of storage
/// modes compared under common random numbers, and an optional parameter
/// sweep.
struct ScenarioDocument {
    std::string id = "scenario";
    ScenarioConfig base;
    std::vector<SimMode> modes{SimMode::UncodedFinite};
    std::optional<SweepSpec> sweep;
    std::string output_dir = "out";

    static ScenarioDocument from_json(const std::string& text);  // ConfigError
    static ScenarioDocument from_file(const std::string& path);
    static ScenarioDocument preset(const std::string& name);  // fig3|fig4|fig5

    std::string to_json() const;  // resolved-configuration echo
    void validate() const;

    /// The base config with one sweep value applied.
    ScenarioConfig cell_config(SimMode mode,
                               std::optional<double> sweep_value) const;
};

struct ResultRow {
    std::string scenario;
    SimMode mode = SimMode::UncodedFinite;
    std::optional<double> sweep_value;
    ScenarioConfig cfg;
    std::optional<SummaryStats> stats;           // empty for analytic rows
    std::optional<double> analytic_ext_block;    // infinite-IO rows only
};

struct LeaderRow {
    SimMode mode = SimMode::UncodedFinite;
    double pbd = 0;
    int key = 0;  // leader rank (coded) / completed stripe sets (uncoded)
    std::optional<double> prob, se;
    std::uint64_t n_obs = 0;
    std::optional<double> analytic_value, analytic_lb, analytic_ub;
};

struct ScenarioResult {
    ScenarioDocument doc;
    std::vector<ResultRow> rows;
    std::vector<LeaderRow> leader_rows;
    std::vector<std::vector<MetricsAccumulator>> cell_metrics;  // per cell
};

/// Runs every (mode, sweep value) cell for the configured number of
/// replications.  Replications of one batch share arrival/availability
/// streams across modes.  threads = 0 picks the hardware concurrency; the
/// result does not depend on the thread count.
ScenarioResult run_scenario(const ScenarioDocument& doc, unsigned threads = 0);

std::vector<ResultRow> analytic_erlang_rows(double lambda, std::size_t chunks,
                                            const std::vector<unsigned>& buffers);
std::vector<LeaderRow> analytic_leader_rows(const std::vector<double>& pbds,
                                            unsigned replication,
                                            unsigned chunks,
                                            unsigned stripe_sets,
                                            StorageFormat format);

std::string results_csv(const std::vector<ResultRow>& rows);
std::string leader_block_csv(const std::vector<LeaderRow>& rows);

/// Writes results.csv, leader_block.csv and scenario.json under dir.
void write_scenario_outputs(const ScenarioResult& result,
                            const std::string& dir);

/// Fast invariant suite; prints one status line per check and returns the
/// number of failures.
int selftest(std::ostream& out);

}  // namespace ncsched
