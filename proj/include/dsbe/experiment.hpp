/*
Copyright 2026 The dsbe Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef DSBE_EXPERIMENT_HPP_
#define DSBE_EXPERIMENT_HPP_

// Experiment driver behind the run / grid / bench / replay verbs.

#include "dsbe/io.hpp"
#include "dsbe/metrics.hpp"
#include "dsbe/network.hpp"
#include "dsbe/observers.hpp"
#include "dsbe/plant.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace dsbe
{

struct RunConfig
{
    ObserverKind algorithm = ObserverKind::SetMembership;
    bool diffusion = true;
    int neighbors = 4;
    std::string topology_file; ///< overrides `neighbors` when set
    int n_nodes = 8;
    int steps = 200;
    std::uint64_t seed = 1;
    int runs = 1; ///< grid: seeds seed, seed+1, ..., seed+runs-1
    Eigen::Index q = kDefaultReductionOrder;
    double q_scale = 1.0;
    double r_scale = 1.0;
    RadiusKind radius = RadiusKind::Frobenius;
    int burn_in = 5;
    int snapshot_every = 10; ///< 0 disables snapshots
    bool record_timing = false;
    double containment_tol = 1e-7;
    std::string output_dir;
    std::string trajectory_file; ///< replay input; empty means simulate

    /// Throws std::invalid_argument on out-of-range values.
    void validate() const;
};

/**
 * Applies the keys present in `j` on top of `base`. Recognised keys:
 * algorithm ("sm"|"iv"), diffusion (bool), neighbors, topology_file, nodes,
 * steps, seed, runs, q, q_scale, r_scale, radius ("frobenius"|"halfdiag"),
 * burn_in, snapshot_every, record_timing, containment_tol, output_dir,
 * trajectory_file. Unknown keys are an error.
 */
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});
nlohmann::json config_to_json(const RunConfig& cfg);

const char* algorithm_name(ObserverKind kind);
ObserverKind parse_algorithm(const std::string& name);

struct Snapshot
{
    int step = 0;
    Vector truth;
    std::vector<Zonotope> sets;
};

struct RunOutput
{
    RunLabel label;
    Trajectory trajectory;
    std::vector<SimRecord> records;
    std::vector<StepHausdorff> hausdorff;
    RunSummary summary;
    std::vector<Snapshot> snapshots;
    /// (step, node) pairs whose estimate missed the true state.
    std::vector<std::pair<int, int>> violations;
};

Topology topology_for(const RunConfig& cfg);

/// Runs the observer network over an existing trajectory.
RunOutput run_on_trajectory(const RunConfig& cfg, const Scenario& scenario, const Topology& topology,
                            const Trajectory& traj);

/// Simulates (or loads cfg.trajectory_file) and runs.
RunOutput run_experiment(const RunConfig& cfg);

std::vector<SummaryRow> summary_rows(const RunLabel& label, const RunSummary& summary);

/// records.csv, summary.csv, trajectory.csv, snapshots/step_NNNN.json.
void write_run_outputs(const RunOutput& out, const std::filesystem::path& dir);

struct GridOutput
{
    std::vector<SummaryRow> rows;
    int containment_violations = 0;
};

/**
 * 2 algorithms x {diffusion on, off} x {2, 4, 6} neighbours, all cells on
 * the same trajectory per seed. With runs > 1 the pooled rows are followed
 * by "<metric>_across_seeds" rows holding the mean/std of per-seed means.
 */
GridOutput run_grid(const RunConfig& base, const std::vector<int>& neighbor_counts = {2, 4, 6});

void write_grid_outputs(const GridOutput& out, const std::filesystem::path& dir);

struct BenchTable
{
    std::vector<int> neighbor_counts;
    std::vector<std::string> steps; ///< measurement, diffusion, time, luenberger
    std::vector<std::vector<double>> mean_us; ///< [step][k]
};

/// Mean time per call of each observer sub-step on random 20-generator zonotopes.
BenchTable run_bench(int repetitions, const std::vector<int>& neighbor_counts = {6, 4, 2}, std::uint64_t seed = 1,
                     Eigen::Index generators = 20);

std::string bench_to_csv(const BenchTable& table);

} // namespace dsbe

#endif
