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

// dsbe: command-line front end. Talks to the library only through dsbe.h.

#include "dsbe/dsbe.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

namespace
{

enum ExitCode
{
    kOk = 0,
    kConfigError = 1,
    kRuntimeError = 2,
    kContainmentViolation = 3,
};

struct Flags
{
    std::string config_file;
    std::string out_dir;
    std::optional<std::string> algorithm;
    std::optional<std::string> diffusion;
    std::optional<int> neighbors;
    std::optional<std::string> topology_file;
    std::optional<int> nodes;
    std::optional<int> steps;
    std::optional<std::uint64_t> seed;
    std::optional<int> runs;
    std::optional<int> q;
    std::optional<double> q_scale;
    std::optional<double> r_scale;
    std::optional<std::string> radius;
    std::optional<int> burn_in;
    std::optional<int> snapshot_every;
    std::optional<double> containment_tol;
    std::optional<std::string> trajectory_file;
    bool record_timing = false;
    bool quiet = false;
};

using ConfigPtr = std::unique_ptr<dsbe_config, decltype(&dsbe_config_destroy)>;

int report(dsbe_status st)
{
    std::cerr << "dsbe: " << dsbe_last_error() << '\n';
    return st == DSBE_ERR_CONFIG || st == DSBE_ERR_NULL ? kConfigError : kRuntimeError;
}

void add_model_flags(CLI::App* cmd, Flags& f, bool grid)
{
    cmd->add_option("-c,--config", f.config_file, "JSON config file; flags override its values")
        ->check(CLI::ExistingFile);
    cmd->add_option("-o,--out", f.out_dir, "Output directory (default: $DSBE_OUTPUT_DIR, else ./dsbe_out)");
    if (!grid)
    {
        cmd->add_option("--alg", f.algorithm, "Observer: sm (set-membership) or iv (interval/Luenberger)")
            ->check(CLI::IsMember({"sm", "iv"}));
        cmd->add_option("--diffusion", f.diffusion, "Diffusion step on or off")->check(CLI::IsMember({"on", "off"}));
        cmd->add_option("--neighbors", f.neighbors, "Ring topology: neighbours per node (2, 4 or 6 for 8 nodes)");
        cmd->add_option("--topology", f.topology_file, "Topology JSON file {\"n\":..,\"neighbors\":[[..],..]}")
            ->check(CLI::ExistingFile);
        cmd->add_option("--snapshot-every", f.snapshot_every, "Zonotope snapshot cadence in steps (0 = off)");
        cmd->add_flag("--record-timing", f.record_timing, "Fill step_time_us (makes records.csv non-reproducible)");
    }
    else
    {
        cmd->add_option("--runs", f.runs, "Number of seeds (seed, seed+1, ...)");
    }
    cmd->add_option("--nodes", f.nodes, "Number of nodes");
    cmd->add_option("--steps", f.steps, "Number of steps");
    cmd->add_option("--seed", f.seed, "Random seed");
    cmd->add_option("--q", f.q, "Generator budget after reduction");
    cmd->add_option("--q-scale", f.q_scale, "Process-noise scale");
    cmd->add_option("--r-scale", f.r_scale, "Measurement-noise scale");
    cmd->add_option("--radius", f.radius, "Radius definition")->check(CLI::IsMember({"frobenius", "halfdiag"}));
    cmd->add_option("--burn-in", f.burn_in, "Steps excluded from run aggregates");
    cmd->add_option("--containment-tol", f.containment_tol, "Tolerance of the containment check");
    cmd->add_flag("--quiet", f.quiet, "Only print errors");
}

nlohmann::json overrides(const Flags& f)
{
    nlohmann::json j = nlohmann::json::object();
    if (f.algorithm)
        j["algorithm"] = *f.algorithm;
    if (f.diffusion)
        j["diffusion"] = *f.diffusion == "on";
    if (f.neighbors)
        j["neighbors"] = *f.neighbors;
    if (f.topology_file)
        j["topology_file"] = *f.topology_file;
    if (f.nodes)
        j["nodes"] = *f.nodes;
    if (f.steps)
        j["steps"] = *f.steps;
    if (f.seed)
        j["seed"] = *f.seed;
    if (f.runs)
        j["runs"] = *f.runs;
    if (f.q)
        j["q"] = *f.q;
    if (f.q_scale)
        j["q_scale"] = *f.q_scale;
    if (f.r_scale)
        j["r_scale"] = *f.r_scale;
    if (f.radius)
        j["radius"] = *f.radius;
    if (f.burn_in)
        j["burn_in"] = *f.burn_in;
    if (f.snapshot_every)
        j["snapshot_every"] = *f.snapshot_every;
    if (f.containment_tol)
        j["containment_tol"] = *f.containment_tol;
    if (f.trajectory_file)
        j["trajectory_file"] = *f.trajectory_file;
    if (f.record_timing)
        j["record_timing"] = true;
    return j;
}

// Defaults, then the config file, then the flags.
int build_config(const Flags& f, ConfigPtr& cfg, std::string& out_dir)
{
    dsbe_config* raw = nullptr;
    if (dsbe_status st = dsbe_config_create(&raw); st != DSBE_OK)
        return report(st);
    cfg.reset(raw);
    if (!f.config_file.empty())
        if (dsbe_status st = dsbe_config_load_file(cfg.get(), f.config_file.c_str()); st != DSBE_OK)
            return report(st == DSBE_ERR_IO ? DSBE_ERR_CONFIG : st);
    if (dsbe_status st = dsbe_config_apply_json(cfg.get(), overrides(f).dump().c_str()); st != DSBE_OK)
        return report(st);

    size_t needed = 0;
    dsbe_config_to_json(cfg.get(), nullptr, 0, &needed);
    std::string text(needed, '\0');
    dsbe_config_to_json(cfg.get(), text.data(), text.size(), &needed);
    text.resize(needed - 1);
    const std::string from_config = nlohmann::json::parse(text).value("output_dir", "");

    out_dir = f.out_dir;
    if (out_dir.empty())
        out_dir = from_config;
    if (out_dir.empty())
        if (const char* env = std::getenv("DSBE_OUTPUT_DIR"); env && *env)
            out_dir = env;
    if (out_dir.empty())
        out_dir = "dsbe_out";
    return kOk;
}

int cmd_run(const Flags& f)
{
    ConfigPtr cfg(nullptr, &dsbe_config_destroy);
    std::string out_dir;
    if (int rc = build_config(f, cfg, out_dir); rc != kOk)
        return rc;

    dsbe_run* raw = nullptr;
    if (dsbe_status st = dsbe_run_create(cfg.get(), &raw); st != DSBE_OK)
        return report(st);
    std::unique_ptr<dsbe_run, decltype(&dsbe_run_destroy)> run(raw, &dsbe_run_destroy);
    if (dsbe_status st = dsbe_run_write(run.get(), out_dir.c_str()); st != DSBE_OK)
        return report(st);

    const int violations = dsbe_run_num_violations(run.get());
    if (!f.quiet)
    {
        double radius = 0.0, error = 0.0, hd = 0.0;
        dsbe_run_summary(run.get(), "radius_m", &radius, nullptr);
        dsbe_run_summary(run.get(), "center_err_m", &error, nullptr);
        dsbe_run_summary(run.get(), "hausdorff_m", &hd, nullptr);
        std::printf("%d records -> %s\nmean radius %.4g m, center error %.4g m, hausdorff %.4g m\n",
                    dsbe_run_num_records(run.get()), out_dir.c_str(), radius, error, hd);
    }
    if (violations > 0)
    {
        std::cerr << "dsbe: containment violated at " << violations << " (step, node) pairs\n";
        return kContainmentViolation;
    }
    return kOk;
}

int cmd_grid(const Flags& f)
{
    ConfigPtr cfg(nullptr, &dsbe_config_destroy);
    std::string out_dir;
    if (int rc = build_config(f, cfg, out_dir); rc != kOk)
        return rc;
    int violations = 0;
    if (dsbe_status st = dsbe_grid_run(cfg.get(), out_dir.c_str(), &violations); st != DSBE_OK)
        return report(st);
    if (!f.quiet)
        std::printf("grid summary -> %s/grid_summary.csv\n", out_dir.c_str());
    if (violations > 0)
    {
        std::cerr << "dsbe: containment violated " << violations << " times across the grid\n";
        return kContainmentViolation;
    }
    return kOk;
}

int cmd_bench(int repetitions, std::uint64_t seed, const std::string& out_file)
{
    dsbe_bench* raw = nullptr;
    if (dsbe_status st = dsbe_bench_create(repetitions, seed, &raw); st != DSBE_OK)
        return report(st);
    std::unique_ptr<dsbe_bench, decltype(&dsbe_bench_destroy)> bench(raw, &dsbe_bench_destroy);
    size_t needed = 0;
    dsbe_bench_csv(bench.get(), nullptr, 0, &needed);
    std::string csv(needed, '\0');
    dsbe_bench_csv(bench.get(), csv.data(), csv.size(), &needed);
    csv.resize(needed - 1);
    std::fputs(csv.c_str(), stdout);
    if (!out_file.empty())
    {
        std::FILE* fp = std::fopen(out_file.c_str(), "wb");
        if (!fp || std::fputs(csv.c_str(), fp) < 0)
        {
            if (fp)
                std::fclose(fp);
            std::cerr << "dsbe: cannot write " << out_file << '\n';
            return kRuntimeError;
        }
        std::fclose(fp);
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Distributed set-based state estimation over zonotopes"};
    app.require_subcommand(1);
    app.set_version_flag("--version", dsbe_version());

    Flags run_flags, grid_flags, replay_flags;
    CLI::App* run = app.add_subcommand("run", "Simulate a trajectory and run one observer configuration");
    add_model_flags(run, run_flags, false);

    CLI::App* grid = app.add_subcommand("grid", "Run sm/iv x diffusion on/off x 2/4/6 neighbours");
    add_model_flags(grid, grid_flags, true);

    CLI::App* replay = app.add_subcommand("replay", "Run an observer on an exported trajectory.csv");
    add_model_flags(replay, replay_flags, false);
    std::string trajectory;
    replay->add_option("trajectory", trajectory, "Trajectory CSV (step,x1,x2,y0,...)")
        ->required()
        ->check(CLI::ExistingFile);

    int repetitions = 100000;
    std::uint64_t bench_seed = 1;
    std::string bench_out;
    CLI::App* bench = app.add_subcommand("bench", "Time the observer sub-steps at 6, 4 and 2 neighbours");
    bench->add_option("-n,--reps", repetitions, "Repetitions per cell (>= 100)");
    bench->add_option("--seed", bench_seed, "Seed of the random inputs");
    bench->add_option("-o,--out", bench_out, "Also write the table to this CSV file");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::Success& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        app.exit(e);
        return kConfigError;
    }

    if (*run)
        return cmd_run(run_flags);
    if (*grid)
        return cmd_grid(grid_flags);
    if (*replay)
    {
        replay_flags.trajectory_file = trajectory;
        return cmd_run(replay_flags);
    }
    return cmd_bench(repetitions, bench_seed, bench_out);
}
