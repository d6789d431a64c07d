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

#ifndef DSBE_METRICS_HPP_
#define DSBE_METRICS_HPP_

#include "dsbe/zonotope.hpp"

#include <chrono>
#include <span>
#include <stdexcept>
#include <vector>

namespace dsbe
{

enum class RadiusKind
{
    Frobenius, ///< ||G||_F (default)
    HalfDiagonal, ///< half the diagonal of the interval hull
};

/// One row of the per-step export.
struct SimRecord
{
    int step = 0;
    int node = 0;
    double radius = 0.0;       ///< m, per the selected RadiusKind
    double center_error = 0.0; ///< m
    double lb_x = 0.0;
    double ub_x = 0.0;
    double lb_y = 0.0;
    double ub_y = 0.0;
    double step_time_us = 0.0; ///< 0 unless timing was recorded
    // Not exported in the per-step CSV; kept so summaries can report both radius definitions.
    double radius_frobenius = 0.0;
    double radius_half_diagonal = 0.0;
};

struct Stat
{
    double mean = 0.0;
    double std = 0.0;
    std::size_t count = 0;
};

/// Mean and sample standard deviation (n - 1 denominator; 0 for a single value).
Stat mean_std(std::span<const double> values);

struct StepSummary
{
    int step = 0;
    Stat radius;
    Stat center_error;
    Stat hausdorff; ///< count == 0 when there are fewer than two nodes
};

struct RunSummary
{
    std::vector<StepSummary> steps;
    // Aggregates over steps > burn_in, pooled over nodes (and node pairs for Hausdorff).
    Stat radius;
    Stat center_error;
    Stat hausdorff;
    Stat radius_frobenius;
    Stat radius_half_diagonal;
};

/// Pairwise Hausdorff distances of one step, all unordered node pairs.
struct StepHausdorff
{
    int step = 0;
    std::vector<double> distances;
};

double radius(const Zonotope& z, RadiusKind kind = RadiusKind::Frobenius);

/// Hausdorff distance between the vertex sets of two 2-D zonotopes.
double hausdorff_2d(const Zonotope& a, const Zonotope& b);

/// Hausdorff distance between two finite point sets.
double hausdorff_points(std::span<const Point2> a, std::span<const Point2> b);

/// Distances for all pairs i < j, in (0,1), (0,2), ..., (n-2,n-1) order.
std::vector<double> pairwise_hausdorff(std::span<const Zonotope> sets);

SimRecord make_record(int step, int node, const Zonotope& estimate, const Vector& truth, RadiusKind kind);

/**
 * Per-step means/stds plus run aggregates that skip steps <= burn_in.
 * Throws std::invalid_argument when records is empty.
 */
RunSummary summarize(std::span<const SimRecord> records, std::span<const StepHausdorff> hausdorff, int burn_in);

/// Mean wall-clock microseconds of op() over `repetitions` calls.
template<typename Op>
double time_op(Op&& op, int repetitions)
{
    if (repetitions < 1)
        throw std::invalid_argument("time_op: repetitions must be >= 1");
    using Clock = std::chrono::steady_clock;
    const auto t0 = Clock::now();
    for (int i = 0; i < repetitions; ++i)
        op(i);
    const auto t1 = Clock::now();
    return std::chrono::duration<double, std::micro>(t1 - t0).count() / repetitions;
}

} // namespace dsbe

#endif
