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

#include "dsbe/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dsbe
{

namespace
{

const char* radius_name(RadiusKind kind)
{
    return kind == RadiusKind::Frobenius ? "frobenius" : "halfdiag";
}

RadiusKind parse_radius(const std::string& name)
{
    if (name == "frobenius")
        return RadiusKind::Frobenius;
    if (name == "halfdiag")
        return RadiusKind::HalfDiagonal;
    throw std::invalid_argument("unknown radius definition '" + name + "' (expected frobenius or halfdiag)");
}

Stat pool(const std::vector<Stat>& parts)
{
    Stat out;
    double weighted = 0.0;
    for (const Stat& s : parts)
    {
        out.count += s.count;
        weighted += s.mean * static_cast<double>(s.count);
    }
    if (out.count == 0)
        return out;
    out.mean = weighted / static_cast<double>(out.count);
    double ss = 0.0;
    for (const Stat& s : parts)
    {
        if (s.count == 0)
            continue;
        ss += static_cast<double>(s.count - 1) * s.std * s.std +
              static_cast<double>(s.count) * (s.mean - out.mean) * (s.mean - out.mean);
    }
    out.std = out.count > 1 ? std::sqrt(ss / static_cast<double>(out.count - 1)) : 0.0;
    return out;
}

Stat across(const std::vector<Stat>& parts)
{
    std::vector<double> means;
    for (const Stat& s : parts)
        if (s.count > 0)
            means.push_back(s.mean);
    return mean_std(means);
}

struct MetricView
{
    const char* name;
    Stat RunSummary::*member;
};

constexpr MetricView kMetrics[] = {
    {"radius_m", &RunSummary::radius},
    {"center_err_m", &RunSummary::center_error},
    {"hausdorff_m", &RunSummary::hausdorff},
    {"radius_frobenius_m", &RunSummary::radius_frobenius},
    {"radius_halfdiag_m", &RunSummary::radius_half_diagonal},
};

SummaryRow make_row(const RunLabel& label, const char* metric, const Stat& s)
{
    SummaryRow r;
    r.label = label;
    r.metric = metric;
    if (s.count == 0)
    {
        r.mean = std::numeric_limits<double>::quiet_NaN();
        r.std = std::numeric_limits<double>::quiet_NaN();
    }
    else
    {
        r.mean = s.mean;
        r.std = s.std;
    }
    return r;
}

} // namespace

void RunConfig::validate() const
{
    if (steps < 1)
        throw std::invalid_argument("config: steps must be >= 1");
    if (runs < 1)
        throw std::invalid_argument("config: runs must be >= 1");
    if (n_nodes < 1)
        throw std::invalid_argument("config: nodes must be >= 1");
    if (topology_file.empty() && (neighbors < 0 || neighbors % 2 != 0 || neighbors >= n_nodes))
        throw std::invalid_argument("config: neighbors must be even and below the node count");
    if (q < 2)
        throw std::invalid_argument("config: q must be at least the state dimension (2)");
    if (!(q_scale >= 0.0) || !(r_scale > 0.0))
        throw std::invalid_argument("config: q_scale must be >= 0 and r_scale > 0");
    if (burn_in < 0 || snapshot_every < 0)
        throw std::invalid_argument("config: burn_in and snapshot_every must be >= 0");
    if (!(containment_tol >= 0.0))
        throw std::invalid_argument("config: containment_tol must be >= 0");
}

const char* algorithm_name(ObserverKind kind)
{
    return kind == ObserverKind::SetMembership ? "sm" : "iv";
}

ObserverKind parse_algorithm(const std::string& name)
{
    if (name == "sm")
        return ObserverKind::SetMembership;
    if (name == "iv")
        return ObserverKind::IntervalBased;
    throw std::invalid_argument("unknown algorithm '" + name + "' (expected sm or iv)");
}

RunConfig config_from_json(const nlohmann::json& j, RunConfig cfg)
{
    if (!j.is_object())
        throw std::invalid_argument("config: expected a JSON object");
    try
    {
        for (const auto& [key, v] : j.items())
        {
            if (key == "algorithm")
                cfg.algorithm = parse_algorithm(v.get<std::string>());
            else if (key == "diffusion")
                cfg.diffusion = v.get<bool>();
            else if (key == "neighbors")
                cfg.neighbors = v.get<int>();
            else if (key == "topology_file")
                cfg.topology_file = v.is_null() ? std::string() : v.get<std::string>();
            else if (key == "nodes")
                cfg.n_nodes = v.get<int>();
            else if (key == "steps")
                cfg.steps = v.get<int>();
            else if (key == "seed")
                cfg.seed = v.get<std::uint64_t>();
            else if (key == "runs")
                cfg.runs = v.get<int>();
            else if (key == "q")
                cfg.q = v.get<Eigen::Index>();
            else if (key == "q_scale")
                cfg.q_scale = v.get<double>();
            else if (key == "r_scale")
                cfg.r_scale = v.get<double>();
            else if (key == "radius")
                cfg.radius = parse_radius(v.get<std::string>());
            else if (key == "burn_in")
                cfg.burn_in = v.get<int>();
            else if (key == "snapshot_every")
                cfg.snapshot_every = v.get<int>();
            else if (key == "record_timing")
                cfg.record_timing = v.get<bool>();
            else if (key == "containment_tol")
                cfg.containment_tol = v.get<double>();
            else if (key == "output_dir")
                cfg.output_dir = v.get<std::string>();
            else if (key == "trajectory_file")
                cfg.trajectory_file = v.is_null() ? std::string() : v.get<std::string>();
            else
                throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
    catch (const nlohmann::json::exception& e)
    {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    return cfg;
}

nlohmann::json config_to_json(const RunConfig& cfg)
{
    return {
        {"algorithm", algorithm_name(cfg.algorithm)},
        {"diffusion", cfg.diffusion},
        {"neighbors", cfg.neighbors},
        {"topology_file", cfg.topology_file},
        {"nodes", cfg.n_nodes},
        {"steps", cfg.steps},
        {"seed", cfg.seed},
        {"runs", cfg.runs},
        {"q", cfg.q},
        {"q_scale", cfg.q_scale},
        {"r_scale", cfg.r_scale},
        {"radius", radius_name(cfg.radius)},
        {"burn_in", cfg.burn_in},
        {"snapshot_every", cfg.snapshot_every},
        {"record_timing", cfg.record_timing},
        {"containment_tol", cfg.containment_tol},
        {"output_dir", cfg.output_dir},
        {"trajectory_file", cfg.trajectory_file},
    };
}

Topology topology_for(const RunConfig& cfg)
{
    if (!cfg.topology_file.empty())
    {
        Topology t = load_topology_file(cfg.topology_file);
        if (t.n_nodes != cfg.n_nodes)
            throw std::invalid_argument("topology file has " + std::to_string(t.n_nodes) + " nodes, config expects " +
                                        std::to_string(cfg.n_nodes));
        return t;
    }
    return ring_topology(cfg.n_nodes, cfg.neighbors);
}

RunOutput run_on_trajectory(const RunConfig& cfg, const Scenario& scenario, const Topology& topology,
                            const Trajectory& traj)
{
    cfg.validate();
    topology.validate();
    const SystemModel& model = scenario.model;
    if (traj.n_nodes() != topology.n_nodes || model.n_nodes != topology.n_nodes)
        throw std::invalid_argument("run: trajectory, model and topology disagree on the node count");

    const ObserverConfig obs{cfg.algorithm, cfg.q, cfg.diffusion};
    const bool set_membership = cfg.algorithm == ObserverKind::SetMembership;

    RunOutput out;
    out.label = {algorithm_name(cfg.algorithm), cfg.diffusion, cfg.topology_file.empty() ? cfg.neighbors : -1};
    out.trajectory = traj;

    // SM nodes carry the predicted set for the next measurement, IV nodes the set for the current state.
    std::vector<NodeState> states;
    const Zonotope prior = set_membership ? sm_time_update(model.initial_set, model.F, model.Q) : model.initial_set;
    for (int i = 0; i < topology.n_nodes; ++i)
        states.push_back({i, prior});

    const int T = traj.steps();
    const bool planar = model.initial_set.dim() == 2;
    for (int k = 1; k <= T; ++k)
    {
        // SM corrects the prediction of x_k with y_k; IV propagates x_{k-1} using y_{k-1}.
        const std::vector<Strip> strips = strips_at(model, traj, set_membership ? k : k - 1);
        RoundResult round = run_round(topology, states, strips, obs, model.F, model.Q, k, cfg.record_timing);
        const Vector& truth = traj.states[static_cast<std::size_t>(k)];

        for (int i = 0; i < topology.n_nodes; ++i)
        {
            const Zonotope& est = round.estimates[static_cast<std::size_t>(i)];
            SimRecord r = make_record(k, i, est, truth, cfg.radius);
            if (cfg.record_timing)
                r.step_time_us = round.node_time_us[static_cast<std::size_t>(i)];
            out.records.push_back(r);
            if (!contains_point(est, truth, cfg.containment_tol))
                out.violations.emplace_back(k, i);
        }
        if (planar && topology.n_nodes > 1)
            out.hausdorff.push_back({k, pairwise_hausdorff(round.estimates)});
        if (cfg.snapshot_every > 0 && k % cfg.snapshot_every == 0)
            out.snapshots.push_back({k, truth, round.estimates});
        states = std::move(round.states);
    }

    out.summary = summarize(out.records, out.hausdorff, cfg.burn_in);
    return out;
}

RunOutput run_experiment(const RunConfig& cfg)
{
    cfg.validate();
    const Scenario scenario = rotating_target_scenario({cfg.q_scale, cfg.r_scale, cfg.n_nodes});
    Trajectory traj;
    if (!cfg.trajectory_file.empty())
    {
        std::ifstream is(cfg.trajectory_file);
        if (!is)
            throw std::runtime_error("cannot open trajectory file " + cfg.trajectory_file);
        traj = read_trajectory_csv(is, static_cast<int>(scenario.model.initial_set.dim()));
    }
    else
    {
        traj = simulate(scenario.model, cfg.steps, cfg.seed);
    }
    return run_on_trajectory(cfg, scenario, topology_for(cfg), traj);
}

std::vector<SummaryRow> summary_rows(const RunLabel& label, const RunSummary& summary)
{
    std::vector<SummaryRow> rows;
    for (const MetricView& m : kMetrics)
        rows.push_back(make_row(label, m.name, summary.*(m.member)));
    return rows;
}

void write_run_outputs(const RunOutput& out, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    {
        std::ostringstream os;
        write_records_csv(os, out.label, out.records);
        write_file_atomic(dir / "records.csv", os.str());
    }
    {
        std::ostringstream os;
        write_summary_csv(os, summary_rows(out.label, out.summary));
        write_file_atomic(dir / "summary.csv", os.str());
    }
    {
        std::ostringstream os;
        write_trajectory_csv(os, out.trajectory);
        write_file_atomic(dir / "trajectory.csv", os.str());
    }
    for (const Snapshot& s : out.snapshots)
    {
        nlohmann::json j;
        j["step"] = s.step;
        j["algorithm"] = out.label.algorithm;
        j["diffusion"] = out.label.diffusion;
        j["k_neighbors"] = out.label.k_neighbors;
        j["true_state"] = std::vector<double>(s.truth.data(), s.truth.data() + s.truth.size());
        nlohmann::json nodes = nlohmann::json::array();
        for (std::size_t i = 0; i < s.sets.size(); ++i)
        {
            nlohmann::json node = zonotope_to_json(s.sets[i]);
            node["node"] = i;
            nodes.push_back(std::move(node));
        }
        j["nodes"] = std::move(nodes);
        char name[32];
        std::snprintf(name, sizeof(name), "step_%04d.json", s.step);
        write_file_atomic(dir / "snapshots" / name, j.dump(1) + "\n");
    }
}

GridOutput run_grid(const RunConfig& base, const std::vector<int>& neighbor_counts)
{
    base.validate();
    for (int k : neighbor_counts)
        if (k < 0 || k % 2 != 0 || k >= base.n_nodes)
            throw std::invalid_argument("grid: invalid neighbour count " + std::to_string(k));

    struct Cell
    {
        RunLabel label;
        std::vector<RunSummary> per_seed;
    };
    std::vector<Cell> cells;
    for (ObserverKind alg : {ObserverKind::SetMembership, ObserverKind::IntervalBased})
        for (bool diffusion : {true, false})
            for (int k : neighbor_counts)
                cells.push_back({{algorithm_name(alg), diffusion, k}, {}});

    GridOutput out;
    const Scenario scenario = rotating_target_scenario({base.q_scale, base.r_scale, base.n_nodes});
    for (int run = 0; run < base.runs; ++run)
    {
        RunConfig seeded = base;
        seeded.seed = base.seed + static_cast<std::uint64_t>(run);
        seeded.topology_file.clear();
        const Trajectory traj = simulate(scenario.model, seeded.steps, seeded.seed);
        for (Cell& cell : cells)
        {
            RunConfig cfg = seeded;
            cfg.algorithm = parse_algorithm(cell.label.algorithm);
            cfg.diffusion = cell.label.diffusion;
            cfg.neighbors = cell.label.k_neighbors;
            cfg.snapshot_every = 0;
            const RunOutput r = run_on_trajectory(cfg, scenario, ring_topology(cfg.n_nodes, cfg.neighbors), traj);
            out.containment_violations += static_cast<int>(r.violations.size());
            cell.per_seed.push_back(r.summary);
        }
    }

    for (const Cell& cell : cells)
    {
        for (const MetricView& m : kMetrics)
        {
            std::vector<Stat> parts;
            for (const RunSummary& s : cell.per_seed)
                parts.push_back(s.*(m.member));
            out.rows.push_back(make_row(cell.label, m.name, pool(parts)));
        }
        if (base.runs > 1)
        {
            for (const MetricView& m : kMetrics)
            {
                std::vector<Stat> parts;
                for (const RunSummary& s : cell.per_seed)
                    parts.push_back(s.*(m.member));
                out.rows.push_back(make_row(cell.label, (std::string(m.name) + "_across_seeds").c_str(), across(parts)));
            }
        }
    }
    return out;
}

void write_grid_outputs(const GridOutput& out, const std::filesystem::path& dir)
{
    std::ostringstream os;
    write_summary_csv(os, out.rows);
    write_file_atomic(dir / "grid_summary.csv", os.str());
}

BenchTable run_bench(int repetitions, const std::vector<int>& neighbor_counts, std::uint64_t seed,
                     Eigen::Index generators)
{
    if (repetitions < 1)
        throw std::invalid_argument("bench: repetitions must be >= 1");
    constexpr int kPool = 32;
    const Scenario scenario = rotating_target_scenario();
    const Matrix& F = scenario.model.F;
    const Matrix& Q = scenario.model.Q;
    const double r = kDefaultMeasurementNoise;
    Rng rng(seed, 0x5eed);

    auto random_zonotope = [&]() {
        Vector c(2);
        c << rng.uniform(-50.0, 50.0), rng.uniform(-50.0, 50.0);
        Matrix G(2, generators);
        for (Eigen::Index i = 0; i < G.size(); ++i)
            G.data()[i] = rng.uniform(-1.0, 1.0);
        return Zonotope(std::move(c), std::move(G));
    };

    BenchTable table;
    table.neighbor_counts = neighbor_counts;
    table.steps = {"measurement", "diffusion", "time", "luenberger"};
    table.mean_us.assign(4, std::vector<double>(neighbor_counts.size(), 0.0));

    struct Inputs
    {
        std::vector<Zonotope> priors;
        std::vector<std::vector<Strip>> strips;
        std::vector<std::vector<Zonotope>> shared;
    };
    // The priors are shared by all columns so the k-independent time update sees identical inputs.
    std::vector<Zonotope> priors;
    for (int p = 0; p < kPool; ++p)
        priors.push_back(random_zonotope());
    std::vector<Inputs> inputs;
    for (int k : neighbor_counts)
    {
        const int m = k + 1;
        Inputs in;
        in.priors = priors;
        for (int p = 0; p < kPool; ++p)
        {
            std::vector<Strip> strips;
            std::vector<Zonotope> shared;
            for (int j = 0; j < m; ++j)
            {
                RowVector h = RowVector::Zero(2);
                h(j % 2) = 1.0;
                const double y = h.dot(priors[static_cast<std::size_t>(p)].center()) + rng.uniform(-1.0, 1.0);
                strips.emplace_back(std::move(h), y, r);
                shared.push_back(random_zonotope());
            }
            in.strips.push_back(std::move(strips));
            in.shared.push_back(std::move(shared));
        }
        inputs.push_back(std::move(in));
    }

    volatile double sink = 0.0;
    const auto at = [](int i) { return static_cast<std::size_t>(i % kPool); };
    auto run_cell = [&](std::size_t row, const Inputs& in, int reps) {
        switch (row)
        {
        case 0:
            return time_op(
                [&](int i) { sink = sink + sm_measurement_update({0, in.priors[at(i)]}, in.strips[at(i)]).center()(0); },
                reps);
        case 1:
            return time_op([&](int i) { sink = sink + sm_diffusion_update(in.shared[at(i)], generators).center()(0); },
                           reps);
        case 2:
            return time_op([&](int i) { sink = sink + sm_time_update(in.priors[at(i)], F, Q).center()(0); }, reps);
        default:
            return time_op(
                [&](int i) {
                    sink = sink +
                           iv_luenberger_update({0, in.priors[at(i)]}, in.strips[at(i)], F, Q, generators).center()(0);
                },
                reps);
        }
    };

    // Columns are timed in interleaved slices after a warm-up pass so clock
    // ramp-up and cache state do not favour whichever k happens to run first.
    constexpr int kSlices = 10;
    for (std::size_t row = 0; row < table.steps.size(); ++row)
    {
        for (const Inputs& in : inputs)
            run_cell(row, in, std::min(repetitions, 1000));
        std::vector<double> total_us(inputs.size(), 0.0);
        for (int slice = 0; slice < kSlices; ++slice)
        {
            const int reps = repetitions / kSlices + (slice < repetitions % kSlices ? 1 : 0);
            if (reps == 0)
                continue;
            for (std::size_t col = 0; col < inputs.size(); ++col)
                total_us[col] += run_cell(row, inputs[col], reps) * reps;
        }
        for (std::size_t col = 0; col < inputs.size(); ++col)
            table.mean_us[row][col] = total_us[col] / repetitions;
    }
    (void)sink;
    return table;
}

std::string bench_to_csv(const BenchTable& table)
{
    std::ostringstream os;
    os << "step";
    for (int k : table.neighbor_counts)
        os << ",k" << k << "_us";
    os << '\n';
    for (std::size_t row = 0; row < table.steps.size(); ++row)
    {
        os << table.steps[row];
        for (double v : table.mean_us[row])
            os << ',' << format_double(v);
        os << '\n';
    }
    return os.str();
}

} // namespace dsbe
