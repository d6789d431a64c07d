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

// Acceptance run: one PASS/FAIL line per criterion, plus INFO lines for the
// noise-scale sweep. Exits 0 once every check has run; with --strict it
// exits 1 when any criterion fails. --report FILE also writes the lines to FILE.

#include "dsbe/experiment.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

using namespace dsbe;
namespace fs = std::filesystem;

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

int g_failed = 0;
std::FILE* g_report = nullptr;

// Writes a line to stdout and, when requested, to the report file.
void emit(const std::string& line)
{
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
    if (g_report)
    {
        std::fprintf(g_report, "%s\n", line.c_str());
        std::fflush(g_report);
    }
}

void report(int id, const char* name, bool pass, const std::string& detail)
{
    if (!pass)
        ++g_failed;
    emit(fmt("%s criterion %d (%s): ", pass ? "PASS" : "FAIL", id, name) + detail);
}

// Grid rows indexed by (algorithm, diffusion, k, metric).
using GridKey = std::tuple<std::string, bool, int, std::string>;
std::map<GridKey, double> index_rows(const GridOutput& g)
{
    std::map<GridKey, double> m;
    for (const SummaryRow& r : g.rows)
        m[{r.label.algorithm, r.label.diffusion, r.label.k_neighbors, r.metric}] = r.mean;
    return m;
}

// ---------------------------------------------------------------------------

void containment()
{
    RunConfig base;
    base.steps = 200;
    base.n_nodes = 8;
    base.runs = 20;
    base.seed = 1;
    const auto t0 = Clock::now();
    const GridOutput g = run_grid(base);
    const double s = seconds_since(t0);
    const long checks = 20L * 12 * 200 * 8;
    report(1, "containment", g.containment_violations == 0 && s < 60.0,
           fmt("%d violations in %ld (seed, cell, step, node) checks at tol 1e-7; 20 seeds x {sm,iv} x "
               "{diffusion on,off} x k in {2,4,6}; %.1f s",
               g.containment_violations, checks, s));
}

bool in_all(const std::vector<Strip>& strips, const Vector& x)
{
    for (const Strip& s : strips)
        if (std::abs(s.h.dot(x) - s.y) > s.r)
            return false;
    return true;
}

void soundness()
{
    oracle::Engine g(2001);
    long strip_pts = 0, strip_fail = 0, set_pts = 0, set_fail = 0;
    const int instances = 1000;
    for (int inst = 0; inst < instances; ++inst)
    {
        const Eigen::Index n = 2 + inst % 2;
        const Vector x_star = oracle::random_vector(g, n, 3.0);
        const Zonotope z = oracle::zonotope_around(g, x_star, n + 1 + inst % 4, 2.0);
        const auto strips = oracle::strips_through(g, x_star, 1 + inst % 3, 0.2, 1.5);
        const StripGain gain = inst % 2 == 0 ? optimal_strip_gain(z, strips)
                                             : StripGain{oracle::random_matrix(g, n, static_cast<Eigen::Index>(strips.size()), 2.0), false};
        const Zonotope out = intersect_strips(z, strips, gain);
        for (int s = 0; s < 400; ++s)
        {
            const Vector beta = oracle::random_beta(g, z.num_generators());
            const Vector x = z.center() + z.generators() * beta;
            if (!in_all(strips, x))
                continue;
            ++strip_pts;
            // Explicit coefficients of x in the output: [beta, (h_j x - y_j) / r_j].
            Vector witness(out.num_generators());
            witness.head(beta.size()) = beta;
            for (std::size_t j = 0; j < strips.size(); ++j)
                witness(beta.size() + static_cast<Eigen::Index>(j)) = (strips[j].h.dot(x) - strips[j].y) / strips[j].r;
            const bool by_witness = witness.lpNorm<Eigen::Infinity>() <= 1.0 &&
                                    (out.center() + out.generators() * witness - x).norm() <= 1e-9 * (1.0 + x.norm());
            strip_fail += !by_witness || !oracle::member_by_facets(out, x, 1e-9) || !contains_point(out, x, 1e-9);
        }
    }
    for (int inst = 0; inst < instances; ++inst)
    {
        const Eigen::Index n = 2 + inst % 2;
        const Vector x_star = oracle::random_vector(g, n, 3.0);
        const int m = 2 + inst % 3;
        std::vector<Zonotope> zs;
        for (int j = 0; j < m; ++j)
            zs.push_back(oracle::zonotope_around(g, x_star, n + 1 + (inst + j) % 4, 1.0));
        DiffusionWeights w = optimal_diffusion_weights(zs);
        if (inst % 2 == 1)
        {
            w.w = oracle::random_vector(g, m, 1.0);
            w.w(0) += 2.0; // keeps the sum away from zero; other weights may be negative
        }
        const Zonotope out = intersect_zonotopes(zs, w);
        for (int s = 0; s < 400; ++s)
        {
            const Vector x = oracle::sample_point(g, zs[0].center(), zs[0].generators());
            bool inside = true;
            for (int j = 1; j < m && inside; ++j)
                inside = oracle::member_by_facets(zs[static_cast<std::size_t>(j)], x, 0.0);
            if (!inside)
                continue;
            ++set_pts;
            set_fail += !oracle::member_by_facets(out, x, 1e-9) || !contains_point(out, x, 1e-9);
        }
    }
    report(2, "intersection soundness", strip_fail == 0 && set_fail == 0 && strip_pts > 0 && set_pts > 0,
           fmt("strips: %d instances, %ld points of the true intersection, %ld misses (witness, facet and library checks); sets: %d instances, %ld "
               "points, %ld misses (optimal and random gains/weights)",
               instances, strip_pts, strip_fail, instances, set_pts, set_fail));
}

struct OptimalityTally
{
    int instances = 0, beaten = 0, cg_mismatch = 0, grad_fail = 0;
    double worst_rel = 0.0, worst_grad = 0.0;
};

void check_optimum(OptimalityTally& t, const oracle::Objective& f, const Vector& best_x, const Vector& start,
                   const std::function<Vector()>& draw)
{
    ++t.instances;
    const double best = f(best_x);
    bool ok = true;
    for (int d = 0; d < 200; ++d)
        ok = ok && f(draw()) >= best * (1.0 - 1e-12);
    t.beaten += !ok;
    const double numeric = f(oracle::cg_minimize(f, start));
    const double rel = std::abs(numeric - best) / std::max(best, 1e-300);
    t.worst_rel = std::max(t.worst_rel, rel);
    t.cg_mismatch += rel > 1e-6;
    const double grad = oracle::fd_gradient(f, best_x).lpNorm<Eigen::Infinity>() / std::max(1.0, best);
    t.worst_grad = std::max(t.worst_grad, grad);
    t.grad_fail += grad >= 1e-5;
}

void optimality()
{
    oracle::Engine g(3001);
    OptimalityTally strip, observer, weights;
    for (int inst = 0; inst < 500; ++inst)
    {
        const Eigen::Index n = 2 + inst % 2;
        const int m = 1 + inst % 3;
        const Vector x_star = oracle::random_vector(g, n);
        const Zonotope z = oracle::zonotope_around(g, x_star, n + 1 + inst % 3, 1.5);
        const auto strips = oracle::strips_through(g, x_star, m, 0.1, 1.0);
        const Matrix Gamma = stack_rows(strips);
        Vector r(m);
        for (int j = 0; j < m; ++j)
            r(j) = strips[static_cast<std::size_t>(j)].r;

        for (int which = 0; which < 2; ++which)
        {
            const Matrix F = which == 0 ? Matrix::Identity(n, n) : oracle::random_matrix(g, n, n, 1.2);
            const StripGain gain = which == 0 ? optimal_strip_gain(z, strips) : optimal_observer_gain(F, z, strips);
            const oracle::Objective f = [&](const Vector& v) {
                return oracle::gain_objective(F, z.generators(), Gamma, r, oracle::unflatten(v, n, m));
            };
            const Vector best = oracle::flatten(gain.lambda);
            auto draw = [&]() -> Vector {
                const double scale = std::pow(10.0, oracle::uniform(g, -5, 0.5));
                return best + oracle::random_vector(g, best.size(), scale);
            };
            check_optimum(which == 0 ? strip : observer, f, best, Vector::Zero(best.size()), draw);
        }

        const int k = 2 + inst % 6;
        std::vector<Zonotope> zs;
        std::vector<Matrix> Gs;
        for (int j = 0; j < k; ++j)
        {
            zs.push_back(oracle::zonotope_around(g, x_star, 2 + (inst + j) % 5, oracle::uniform(g, 0.2, 3.0)));
            Gs.push_back(zs.back().generators());
        }
        const Vector w = optimal_diffusion_weights(zs).w;
        const oracle::Objective fw = [&](const Vector& v) { return oracle::weight_objective(Gs, v); };
        auto draw_w = [&]() -> Vector {
            if (oracle::uniform(g, 0, 1) < 0.5)
            {
                Vector u(k);
                for (int j = 0; j < k; ++j)
                    u(j) = -std::log(oracle::uniform(g, 1e-12, 1.0));
                return u / u.sum();
            }
            return w + oracle::random_vector(g, k, std::pow(10.0, oracle::uniform(g, -5, 0)));
        };
        check_optimum(weights, fw, w, Vector::Constant(k, 1.0 / k), draw_w);
    }
    auto line = [](const char* what, const OptimalityTally& t) {
        return fmt("%s: %d/%d instances unbeaten by 200 draws, %d CG mismatches (worst rel %.1e), %d gradient "
                   "failures (worst %.1e)",
                   what, t.instances - t.beaten, t.instances, t.cg_mismatch, t.worst_rel, t.grad_fail, t.worst_grad);
    };
    const bool pass = strip.beaten + observer.beaten + weights.beaten == 0 &&
                      strip.cg_mismatch + observer.cg_mismatch + weights.cg_mismatch == 0 &&
                      strip.grad_fail + observer.grad_fail + weights.grad_fail == 0;
    report(3, "closed-form optimality", pass,
           line("strip gain (F = I)", strip) + "; " + line("observer gain (random F)", observer) + "; " +
               line("diffusion weights", weights));
}

void weight_identity()
{
    oracle::Engine g(4001);
    int bad_identity = 0, bad_bound = 0;
    double worst = 0.0;
    const int instances = 1000;
    for (int inst = 0; inst < instances; ++inst)
    {
        const int k = 2 + inst % 7;
        const Eigen::Index n = 2 + inst % 3;
        std::vector<Zonotope> zs;
        double inv_sum = 0.0, min_beta = INFINITY;
        for (int j = 0; j < k; ++j)
        {
            zs.emplace_back(oracle::random_vector(g, n),
                            oracle::random_matrix(g, n, 1 + (inst + j) % 6, oracle::uniform(g, 0.05, 5.0)));
            const double beta = zs.back().generators().squaredNorm();
            inv_sum += 1.0 / beta;
            min_beta = std::min(min_beta, beta);
        }
        const double value = intersect_zonotopes(zs, optimal_diffusion_weights(zs)).generators().squaredNorm();
        const double rel = std::abs(value - 1.0 / inv_sum) * inv_sum;
        worst = std::max(worst, rel);
        bad_identity += rel > 1e-9;
        bad_bound += value > min_beta * (1.0 + 1e-12);
    }
    report(4, "diffusion weight identity", bad_identity == 0 && bad_bound == 0,
           fmt("%d instances; worst relative gap to 1/sum(1/beta) %.1e; %d above min beta", instances, worst,
               bad_bound));
}

struct TrendResult
{
    int wins = 0;
    bool largest_at_2 = false;
    double effect[3] = {0, 0, 0}; // k = 2, 4, 6
    bool radius_ok[2] = {false, false};
    double radius[2][3] = {};
    double halfdiag[2][3] = {};
    std::vector<std::string> losses;
};

TrendResult trends(const GridOutput& g)
{
    const auto m = index_rows(g);
    TrendResult t;
    const int ks[3] = {2, 4, 6};
    const char* algs[2] = {"sm", "iv"};
    for (int a = 0; a < 2; ++a)
        for (int ki = 0; ki < 3; ++ki)
        {
            for (const char* metric : {"hausdorff_m", "center_err_m"})
            {
                const double on = m.at({algs[a], true, ks[ki], metric});
                const double off = m.at({algs[a], false, ks[ki], metric});
                if (on < off)
                    ++t.wins;
                else
                    t.losses.push_back(fmt("%s %s k=%d", algs[a], metric, ks[ki]));
                t.effect[ki] += (off - on) / off / 4.0;
            }
            t.radius[a][ki] = m.at({algs[a], true, ks[ki], "radius_m"});
            t.halfdiag[a][ki] = m.at({algs[a], true, ks[ki], "radius_halfdiag_m"});
        }
    t.largest_at_2 = t.effect[0] > t.effect[1] && t.effect[0] > t.effect[2];
    for (int a = 0; a < 2; ++a)
        t.radius_ok[a] = t.radius[a][1] <= t.radius[a][0] && t.radius[a][2] <= t.radius[a][1];
    return t;
}

std::string join(const std::vector<std::string>& v)
{
    std::string s;
    for (const auto& x : v)
        s += (s.empty() ? "" : ", ") + x;
    return s.empty() ? "none" : s;
}

void trend_criteria(const GridOutput& g)
{
    const TrendResult t = trends(g);
    report(5, "diffusion trend", t.wins >= 10 && t.largest_at_2,
           fmt("diffusion better in %d/12 (metric x algorithm x k) comparisons (losses: %s); mean relative "
               "reduction k=2 %.3f, k=4 %.3f, k=6 %.3f -> largest at k=2: %s",
               t.wins, join(t.losses).c_str(), t.effect[0], t.effect[1], t.effect[2], t.largest_at_2 ? "yes" : "no"));
    report(6, "connectivity trend", t.radius_ok[0] && t.radius_ok[1],
           fmt("F-radius with diffusion, k=2/4/6: sm %.4f/%.4f/%.4f (%s), iv %.4f/%.4f/%.4f (%s); half-diagonal "
               "radius for reference: sm %.4f/%.4f/%.4f, iv %.4f/%.4f/%.4f",
               t.radius[0][0], t.radius[0][1], t.radius[0][2], t.radius_ok[0] ? "non-increasing" : "increases",
               t.radius[1][0], t.radius[1][1], t.radius[1][2], t.radius_ok[1] ? "non-increasing" : "increases",
               t.halfdiag[0][0], t.halfdiag[0][1], t.halfdiag[0][2], t.halfdiag[1][0], t.halfdiag[1][1],
               t.halfdiag[1][2]));
}

void noise_sweep()
{
    for (double qs : {0.1, 1.0, 10.0})
        for (double rs : {0.1, 1.0, 10.0})
        {
            RunConfig base;
            base.runs = 5;
            base.q_scale = qs;
            base.r_scale = rs;
            const GridOutput g = run_grid(base);
            const TrendResult t = trends(g);
            emit(fmt("INFO noise sweep q_scale=%g r_scale=%g: containment violations %d; criterion 5 %d/12 ", qs, rs,
                     g.containment_violations, t.wins) +
                 "(losses: " + join(t.losses) +
                 fmt("), largest at k=2: %s; criterion 6 F-radius sm %s, iv %s", t.largest_at_2 ? "yes" : "no",
                     t.radius_ok[0] ? "ok" : "increases", t.radius_ok[1] ? "ok" : "increases"));
        }
}

void timing()
{
    const auto t0 = Clock::now();
    const BenchTable b = run_bench(100000);
    const double s = seconds_since(t0);
    // Columns are k = 6, 4, 2.
    const auto& time_row = b.mean_us[2];
    const double mean_time = (time_row[0] + time_row[1] + time_row[2]) / 3.0;
    bool flat = true;
    for (double v : time_row)
        flat = flat && std::abs(v - mean_time) <= 0.3 * mean_time;
    bool monotone = true;
    std::string detail;
    for (std::size_t row : {0u, 1u, 3u})
    {
        const auto& v = b.mean_us[row];
        monotone = monotone && v[2] <= v[1] && v[1] <= v[0];
        detail += fmt("%s %.2f/%.2f/%.2f us; ", b.steps[row].c_str(), v[2], v[1], v[0]);
    }
    report(7, "timing shape", flat && monotone && s < 300.0,
           fmt("k=2/4/6: time update %.2f/%.2f/%.2f us (%s within +-30%% of the mean); %s%s; 10^5 reps per cell in "
               "%.1f s",
               time_row[2], time_row[1], time_row[0], flat ? "all" : "NOT all", detail.c_str(),
               monotone ? "all non-decreasing in k" : "NOT non-decreasing in k", s));
}

void determinism()
{
    std::random_device rd;
    const fs::path root = fs::temp_directory_path() / ("dsbe_accept_" + std::to_string(rd()));
    int compared = 0, differ = 0;
    for (ObserverKind kind : {ObserverKind::SetMembership, ObserverKind::IntervalBased})
    {
        RunConfig cfg;
        cfg.algorithm = kind;
        cfg.seed = 42;
        const std::string tag = algorithm_name(kind);
        write_run_outputs(run_experiment(cfg), root / (tag + "_a"));
        write_run_outputs(run_experiment(cfg), root / (tag + "_b"));
        for (const auto& entry : fs::recursive_directory_iterator(root / (tag + "_a")))
        {
            if (!entry.is_regular_file())
                continue;
            const fs::path rel = fs::relative(entry.path(), root / (tag + "_a"));
            ++compared;
            differ += read_file(entry.path()) != read_file(root / (tag + "_b") / rel);
        }
    }
    RunConfig grid_cfg;
    grid_cfg.runs = 2;
    grid_cfg.steps = 50;
    write_grid_outputs(run_grid(grid_cfg), root / "grid_a");
    write_grid_outputs(run_grid(grid_cfg), root / "grid_b");
    ++compared;
    differ += read_file(root / "grid_a" / "grid_summary.csv") != read_file(root / "grid_b" / "grid_summary.csv");
    std::error_code ec;
    fs::remove_all(root, ec);
    report(8, "determinism", differ == 0 && compared > 6,
           fmt("%d output files (records, summary, trajectory, snapshots, grid summary) compared byte for byte, "
               "%d differ",
               compared, differ));
}

} // namespace

int main(int argc, char** argv)
{
    bool strict = false, sweep = true;
    const char* report_path = nullptr;
    for (int i = 1; i < argc; ++i)
    {
        if (std::strcmp(argv[i], "--strict") == 0)
            strict = true;
        else if (std::strcmp(argv[i], "--no-sweep") == 0)
            sweep = false;
        else if (std::strcmp(argv[i], "--report") == 0 && i + 1 < argc)
            report_path = argv[++i];
        else
        {
            std::fprintf(stderr, "usage: %s [--strict] [--no-sweep] [--report FILE]\n", argv[0]);
            return 2;
        }
    }
    if (report_path && !(g_report = std::fopen(report_path, "w")))
    {
        std::fprintf(stderr, "acceptance: cannot open %s\n", report_path);
        return 2;
    }
    try
    {
        containment();
        soundness();
        optimality();
        weight_identity();
        RunConfig base;
        base.runs = 5;
        trend_criteria(run_grid(base));
        timing();
        determinism();
        if (sweep)
            noise_sweep();
    }
    catch (const std::exception& e)
    {
        std::fprintf(stderr, "acceptance: %s\n", e.what());
        return 2;
    }
    emit(fmt("%d of 8 criteria failed", g_failed));
    if (g_report)
        std::fclose(g_report);
    return strict && g_failed > 0 ? 1 : 0;
}
