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

#ifndef DSBE_PLANT_HPP_
#define DSBE_PLANT_HPP_

#include "dsbe/intersection.hpp"
#include "dsbe/network.hpp"
#include "dsbe/zonotope.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace dsbe
{

/**
 * @brief Seedable, platform-independent random stream.
 *
 * mt19937_64 seeded through splitmix64(seed, stream). Uniform doubles are
 * built from the top 53 bits of each draw, so the sequence does not depend
 * on the standard library's distribution implementations.
 *
 * Stream ids used by simulate(): 0 = process noise, 1 + i = node i's
 * measurement noise.
 */
class Rng
{
    public:
        Rng(std::uint64_t seed, std::uint64_t stream);

        /// Uniform on [0, 1).
        double uniform();
        /// Uniform on [lo, hi).
        double uniform(double lo, double hi);

    private:
        std::mt19937_64 engine_;
};

/// c + G beta with beta uniform on [-1, 1]^e.
Vector sample_in_zonotope(const Zonotope& z, Rng& rng);

struct StripTemplate
{
    RowVector h;
    double r = 1.0;
};

/// (node, step) -> measurement row and noise bound.
using MeasurementSchedule = std::function<StripTemplate(int node, int step)>;

struct SystemModel
{
    Matrix F;
    Matrix Q; ///< process-noise generators, n x e_q (e_q may be 0)
    int n_nodes = 0;
    MeasurementSchedule schedule;
    Zonotope initial_set;
    Vector true_initial_state;

    /// Throws std::invalid_argument on inconsistent sizes or an initial state outside the initial set.
    void validate() const;
};

/**
 * states[k] is x_k for k = 0..steps; measurements[k][i] is node i's
 * reading of x_k, also for k = 0..steps.
 */
struct Trajectory
{
    std::vector<Vector> states;
    std::vector<std::vector<double>> measurements;

    int steps() const { return static_cast<int>(states.size()) - 1; }
    int n_nodes() const { return measurements.empty() ? 0 : static_cast<int>(measurements.front().size()); }
};

/// x_{k+1} = F x_k + n_k, y_k^i = h_k^i x_k + v_k^i with bounded uniform noise.
Trajectory simulate(const SystemModel& model, int steps, std::uint64_t seed);

/// The strips all nodes observe at step k of a trajectory.
std::vector<Strip> strips_at(const SystemModel& model, const Trajectory& traj, int step);

/// Independent check of the trajectory's noise bounds. Returns the number of violations.
int count_noise_violations(const SystemModel& model, const Trajectory& traj, double tol = 1e-9);

/// Alternating schedule: h = [1 0] when (node + step) is even, [0 1] otherwise.
MeasurementSchedule alternating_schedule(double r);

struct ScenarioOptions
{
    double q_scale = 1.0;
    double r_scale = 1.0;
    int n_nodes = 8;
};

inline constexpr double kDefaultProcessNoise = 0.02;
inline constexpr double kDefaultMeasurementNoise = 0.2;

struct Scenario
{
    SystemModel model;
    std::vector<int> neighbor_presets; ///< 2, 4, 6
    Topology topology(int k_neighbors) const { return ring_topology(model.n_nodes, k_neighbors); }
};

/**
 * @brief Rotating-target localisation demo.
 *
 * F = [[0.992, -0.1247], [0.1247, 0.992]], an axis-aligned 160 m x 160 m
 * initial box centred at (50, 0), process noise 0.02 I and strip half width
 * 0.2 m (both scaled by the options), alternating measurement rows.
 */
Scenario rotating_target_scenario(const ScenarioOptions& options = {});

} // namespace dsbe

#endif
