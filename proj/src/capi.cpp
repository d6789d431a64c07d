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

#include "dsbe/dsbe.h"
#include "dsbe/experiment.hpp"

#include <cstring>
#include <filesystem>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

struct dsbe_zonotope
{
    dsbe::Zonotope z;
};

struct dsbe_config
{
    dsbe::RunConfig cfg;
};

struct dsbe_run
{
    dsbe::RunOutput out;
};

struct dsbe_bench
{
    dsbe::BenchTable table;
};

namespace
{

thread_local std::string g_last_error;

dsbe_status fail(dsbe_status status, const std::string& msg)
{
    g_last_error = msg;
    return status;
}

// Maps exceptions from the C++ core onto status codes.
template<typename Fn>
dsbe_status guarded(Fn&& fn)
{
    try
    {
        g_last_error.clear();
        fn();
        return DSBE_OK;
    }
    catch (const std::invalid_argument& e)
    {
        return fail(DSBE_ERR_CONFIG, e.what());
    }
    catch (const nlohmann::json::exception& e)
    {
        return fail(DSBE_ERR_CONFIG, e.what());
    }
    catch (const std::filesystem::filesystem_error& e)
    {
        return fail(DSBE_ERR_IO, e.what());
    }
    catch (const std::bad_alloc&)
    {
        return fail(DSBE_ERR_RUNTIME, "out of memory");
    }
    catch (const std::exception& e)
    {
        const std::string what = e.what();
        const bool io = what.rfind("cannot open", 0) == 0 || what.rfind("write failed", 0) == 0;
        return fail(io ? DSBE_ERR_IO : DSBE_ERR_RUNTIME, what);
    }
    catch (...)
    {
        return fail(DSBE_ERR_RUNTIME, "unknown error");
    }
}

dsbe_status copy_string(const std::string& s, char* buffer, size_t capacity, size_t* needed)
{
    if (needed)
        *needed = s.size() + 1;
    if (capacity == 0)
        return DSBE_OK;
    if (!buffer)
        return fail(DSBE_ERR_NULL, "buffer is NULL");
    const size_t n = std::min(capacity - 1, s.size());
    std::memcpy(buffer, s.data(), n);
    buffer[n] = '\0';
    return DSBE_OK;
}

#define DSBE_REQUIRE(ptr)                                                                                              \
    do                                                                                                                 \
    {                                                                                                                  \
        if (!(ptr))                                                                                                    \
            return fail(DSBE_ERR_NULL, #ptr " is NULL");                                                               \
    } while (0)

dsbe_status emit(dsbe::Zonotope z, dsbe_zonotope** out)
{
    *out = new dsbe_zonotope{std::move(z)};
    return DSBE_OK;
}

} // namespace

extern "C" {

const char* dsbe_version(void)
{
    return "1.0.0";
}

const char* dsbe_last_error(void)
{
    return g_last_error.c_str();
}

dsbe_status dsbe_zonotope_create(int n, int e, const double* center, const double* generators, dsbe_zonotope** out)
{
    DSBE_REQUIRE(out);
    DSBE_REQUIRE(center);
    if (n < 1 || e < 0)
        return fail(DSBE_ERR_CONFIG, "zonotope: need n >= 1 and e >= 0");
    if (e > 0 && !generators)
        return fail(DSBE_ERR_NULL, "generators is NULL");
    return guarded([&] {
        dsbe::Vector c = Eigen::Map<const dsbe::Vector>(center, n);
        dsbe::Matrix G = e > 0 ? dsbe::Matrix(Eigen::Map<const dsbe::Matrix>(generators, n, e)) : dsbe::Matrix(n, 0);
        emit(dsbe::Zonotope(std::move(c), std::move(G)), out);
    });
}

void dsbe_zonotope_destroy(dsbe_zonotope* z)
{
    delete z;
}

int dsbe_zonotope_dim(const dsbe_zonotope* z)
{
    return z ? static_cast<int>(z->z.dim()) : 0;
}

int dsbe_zonotope_num_generators(const dsbe_zonotope* z)
{
    return z ? static_cast<int>(z->z.num_generators()) : 0;
}

dsbe_status dsbe_zonotope_get(const dsbe_zonotope* z, double* center, double* generators)
{
    DSBE_REQUIRE(z);
    if (center)
        Eigen::Map<dsbe::Vector>(center, z->z.dim()) = z->z.center();
    if (generators && z->z.num_generators() > 0)
        Eigen::Map<dsbe::Matrix>(generators, z->z.dim(), z->z.num_generators()) = z->z.generators();
    return DSBE_OK;
}

dsbe_status dsbe_zonotope_minkowski_sum(const dsbe_zonotope* a, const dsbe_zonotope* b, dsbe_zonotope** out)
{
    DSBE_REQUIRE(a);
    DSBE_REQUIRE(b);
    DSBE_REQUIRE(out);
    return guarded([&] { emit(dsbe::minkowski_sum(a->z, b->z), out); });
}

dsbe_status dsbe_zonotope_linear_map(const double* L, int rows, const dsbe_zonotope* z, dsbe_zonotope** out)
{
    DSBE_REQUIRE(L);
    DSBE_REQUIRE(z);
    DSBE_REQUIRE(out);
    if (rows < 1)
        return fail(DSBE_ERR_CONFIG, "linear_map: rows must be >= 1");
    return guarded([&] {
        const dsbe::Matrix M = Eigen::Map<const dsbe::Matrix>(L, rows, z->z.dim());
        emit(dsbe::linear_map(M, z->z), out);
    });
}

dsbe_status dsbe_zonotope_reduce(const dsbe_zonotope* z, int q, dsbe_zonotope** out)
{
    DSBE_REQUIRE(z);
    DSBE_REQUIRE(out);
    return guarded([&] { emit(dsbe::reduce(z->z, q), out); });
}

dsbe_status dsbe_zonotope_f_radius(const dsbe_zonotope* z, double* out)
{
    DSBE_REQUIRE(z);
    DSBE_REQUIRE(out);
    *out = dsbe::f_radius(z->z);
    return DSBE_OK;
}

dsbe_status dsbe_zonotope_contains(const dsbe_zonotope* z, const double* x, double tol, int* inside)
{
    DSBE_REQUIRE(z);
    DSBE_REQUIRE(x);
    DSBE_REQUIRE(inside);
    return guarded([&] {
        const dsbe::Vector p = Eigen::Map<const dsbe::Vector>(x, z->z.dim());
        *inside = dsbe::contains_point(z->z, p, tol) ? 1 : 0;
    });
}

dsbe_status dsbe_zonotope_intersect_strips(const dsbe_zonotope* z, int m, const double* H, const double* y,
                                           const double* r, dsbe_zonotope** out)
{
    DSBE_REQUIRE(z);
    DSBE_REQUIRE(H);
    DSBE_REQUIRE(y);
    DSBE_REQUIRE(r);
    DSBE_REQUIRE(out);
    if (m < 1)
        return fail(DSBE_ERR_CONFIG, "intersect_strips: need at least one strip");
    return guarded([&] {
        const Eigen::Map<const dsbe::Matrix> Hm(H, m, z->z.dim());
        std::vector<dsbe::Strip> strips;
        for (int j = 0; j < m; ++j)
            strips.emplace_back(Hm.row(j), y[j], r[j]);
        emit(dsbe::intersect_strips(z->z, strips, dsbe::optimal_strip_gain(z->z, strips)), out);
    });
}

dsbe_status dsbe_zonotope_intersect(int m, const dsbe_zonotope* const* zs, dsbe_zonotope** out)
{
    DSBE_REQUIRE(zs);
    DSBE_REQUIRE(out);
    if (m < 1)
        return fail(DSBE_ERR_CONFIG, "intersect: need at least one zonotope");
    std::vector<dsbe::Zonotope> sets;
    for (int j = 0; j < m; ++j)
    {
        if (!zs[j])
            return fail(DSBE_ERR_NULL, "zs[" + std::to_string(j) + "] is NULL");
        sets.push_back(zs[j]->z);
    }
    return guarded(
        [&] { emit(dsbe::intersect_zonotopes(sets, dsbe::optimal_diffusion_weights(sets)), out); });
}

dsbe_status dsbe_config_create(dsbe_config** out)
{
    DSBE_REQUIRE(out);
    return guarded([&] { *out = new dsbe_config{}; });
}

void dsbe_config_destroy(dsbe_config* cfg)
{
    delete cfg;
}

dsbe_status dsbe_config_apply_json(dsbe_config* cfg, const char* json)
{
    DSBE_REQUIRE(cfg);
    DSBE_REQUIRE(json);
    return guarded([&] {
        nlohmann::json j;
        try
        {
            j = nlohmann::json::parse(json);
        }
        catch (const nlohmann::json::parse_error& e)
        {
            throw std::invalid_argument(std::string("config: ") + e.what());
        }
        cfg->cfg = dsbe::config_from_json(j, cfg->cfg);
    });
}

dsbe_status dsbe_config_load_file(dsbe_config* cfg, const char* path)
{
    DSBE_REQUIRE(cfg);
    DSBE_REQUIRE(path);
    std::string text;
    const dsbe_status st = guarded([&] { text = dsbe::read_file(path); });
    if (st != DSBE_OK)
        return st;
    return dsbe_config_apply_json(cfg, text.c_str());
}

dsbe_status dsbe_config_to_json(const dsbe_config* cfg, char* buffer, size_t capacity, size_t* needed)
{
    DSBE_REQUIRE(cfg);
    std::string text;
    const dsbe_status st = guarded([&] { text = dsbe::config_to_json(cfg->cfg).dump(); });
    if (st != DSBE_OK)
        return st;
    return copy_string(text, buffer, capacity, needed);
}

dsbe_status dsbe_run_create(const dsbe_config* cfg, dsbe_run** out)
{
    DSBE_REQUIRE(cfg);
    DSBE_REQUIRE(out);
    return guarded([&] { *out = new dsbe_run{dsbe::run_experiment(cfg->cfg)}; });
}

void dsbe_run_destroy(dsbe_run* run)
{
    delete run;
}

int dsbe_run_num_records(const dsbe_run* run)
{
    return run ? static_cast<int>(run->out.records.size()) : 0;
}

int dsbe_run_num_violations(const dsbe_run* run)
{
    return run ? static_cast<int>(run->out.violations.size()) : 0;
}

dsbe_status dsbe_run_summary(const dsbe_run* run, const char* metric, double* mean, double* std)
{
    DSBE_REQUIRE(run);
    DSBE_REQUIRE(metric);
    for (const dsbe::SummaryRow& row : dsbe::summary_rows(run->out.label, run->out.summary))
    {
        if (row.metric == metric)
        {
            if (mean)
                *mean = row.mean;
            if (std)
                *std = row.std;
            return DSBE_OK;
        }
    }
    return fail(DSBE_ERR_CONFIG, std::string("unknown metric '") + metric + "'");
}

dsbe_status dsbe_run_write(const dsbe_run* run, const char* dir)
{
    DSBE_REQUIRE(run);
    DSBE_REQUIRE(dir);
    return guarded([&] { dsbe::write_run_outputs(run->out, dir); });
}

dsbe_status dsbe_grid_run(const dsbe_config* cfg, const char* dir, int* violations)
{
    DSBE_REQUIRE(cfg);
    DSBE_REQUIRE(dir);
    return guarded([&] {
        const dsbe::GridOutput grid = dsbe::run_grid(cfg->cfg);
        dsbe::write_grid_outputs(grid, dir);
        if (violations)
            *violations = grid.containment_violations;
    });
}

dsbe_status dsbe_bench_create(int repetitions, uint64_t seed, dsbe_bench** out)
{
    DSBE_REQUIRE(out);
    if (repetitions < 100)
        return fail(DSBE_ERR_CONFIG, "bench: repetitions must be >= 100");
    return guarded([&] { *out = new dsbe_bench{dsbe::run_bench(repetitions, {6, 4, 2}, seed)}; });
}

void dsbe_bench_destroy(dsbe_bench* bench)
{
    delete bench;
}

dsbe_status dsbe_bench_value(const dsbe_bench* bench, int row, int col, double* mean_us)
{
    DSBE_REQUIRE(bench);
    DSBE_REQUIRE(mean_us);
    const auto& t = bench->table.mean_us;
    if (row < 0 || row >= static_cast<int>(t.size()) || col < 0 ||
        col >= static_cast<int>(bench->table.neighbor_counts.size()))
        return fail(DSBE_ERR_CONFIG, "bench: cell index out of range");
    *mean_us = t[static_cast<size_t>(row)][static_cast<size_t>(col)];
    return DSBE_OK;
}

dsbe_status dsbe_bench_csv(const dsbe_bench* bench, char* buffer, size_t capacity, size_t* needed)
{
    DSBE_REQUIRE(bench);
    return copy_string(dsbe::bench_to_csv(bench->table), buffer, capacity, needed);
}

} // extern "C"
