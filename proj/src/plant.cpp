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

#include "dsbe/plant.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dsbe
{

namespace
{

std::uint64_t splitmix64(std::uint64_t& x)
{
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream)
{
    std::uint64_t state = seed;
    std::uint64_t a = splitmix64(state);
    state ^= stream * 0xD1B54A32D192ED03ULL;
    return a ^ splitmix64(state);
}

} // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : engine_(stream_seed(seed, stream)) {}

double Rng::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi)
{
    return lo + (hi - lo) * uniform();
}

Vector sample_in_zonotope(const Zonotope& z, Rng& rng)
{
    Vector beta(z.num_generators());
    for (Eigen::Index j = 0; j < beta.size(); ++j)
        beta(j) = rng.uniform(-1.0, 1.0);
    return z.center() + z.generators() * beta;
}

void SystemModel::validate() const
{
    const Eigen::Index n = initial_set.dim();
    if (F.rows() != n || F.cols() != n)
        throw std::invalid_argument("system model: F must be square and match the initial set dimension");
    if (!F.allFinite())
        throw std::invalid_argument("system model: F has non-finite entries");
    if (Q.cols() > 0 && Q.rows() != n)
        throw std::invalid_argument("system model: Q row count does not match the state dimension");
    if (n_nodes < 1)
        throw std::invalid_argument("system model: at least one node is required");
    if (!schedule)
        throw std::invalid_argument("system model: missing measurement schedule");
    if (true_initial_state.size() != n)
        throw std::invalid_argument("system model: true initial state has the wrong dimension");
    if (!contains_point(initial_set, true_initial_state))
        throw std::invalid_argument("system model: true initial state lies outside the initial set");
}

Trajectory simulate(const SystemModel& model, int steps, std::uint64_t seed)
{
    if (steps < 1)
        throw std::invalid_argument("simulate: steps must be >= 1");
    model.validate();

    const Eigen::Index n = model.initial_set.dim();
    const Zonotope process_noise(Vector::Zero(n), model.Q.cols() > 0 ? model.Q : Matrix(n, 0));
    Rng process_rng(seed, 0);
    std::vector<Rng> node_rngs;
    node_rngs.reserve(static_cast<std::size_t>(model.n_nodes));
    for (int i = 0; i < model.n_nodes; ++i)
        node_rngs.emplace_back(seed, static_cast<std::uint64_t>(i) + 1);

    Trajectory traj;
    traj.states.reserve(static_cast<std::size_t>(steps) + 1);
    traj.measurements.reserve(static_cast<std::size_t>(steps) + 1);
    Vector x = model.true_initial_state;
    for (int k = 0; k <= steps; ++k)
    {
        if (k > 0)
            x = model.F * x + sample_in_zonotope(process_noise, process_rng);
        std::vector<double> ys(static_cast<std::size_t>(model.n_nodes));
        for (int i = 0; i < model.n_nodes; ++i)
        {
            const StripTemplate t = model.schedule(i, k);
            ys[static_cast<std::size_t>(i)] = t.h.dot(x) + node_rngs[static_cast<std::size_t>(i)].uniform(-t.r, t.r);
        }
        traj.states.push_back(x);
        traj.measurements.push_back(std::move(ys));
    }
    return traj;
}

std::vector<Strip> strips_at(const SystemModel& model, const Trajectory& traj, int step)
{
    if (step < 0 || step > traj.steps())
        throw std::out_of_range("strips_at: step " + std::to_string(step) + " outside the trajectory");
    if (traj.n_nodes() != model.n_nodes)
        throw std::invalid_argument("strips_at: trajectory and model disagree on the node count");
    std::vector<Strip> strips;
    strips.reserve(static_cast<std::size_t>(model.n_nodes));
    for (int i = 0; i < model.n_nodes; ++i)
    {
        StripTemplate t = model.schedule(i, step);
        strips.emplace_back(std::move(t.h), traj.measurements[static_cast<std::size_t>(step)][static_cast<std::size_t>(i)],
                            t.r);
    }
    return strips;
}

int count_noise_violations(const SystemModel& model, const Trajectory& traj, double tol)
{
    const Eigen::Index n = model.initial_set.dim();
    const Zonotope process_noise(Vector::Zero(n), model.Q.cols() > 0 ? model.Q : Matrix(n, 0));
    int violations = 0;
    for (int k = 0; k <= traj.steps(); ++k)
    {
        const Vector& x = traj.states[static_cast<std::size_t>(k)];
        if (k > 0 && !contains_point(process_noise, x - model.F * traj.states[static_cast<std::size_t>(k - 1)], tol))
            ++violations;
        for (int i = 0; i < model.n_nodes; ++i)
        {
            const StripTemplate t = model.schedule(i, k);
            const double y = traj.measurements[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
            if (std::abs(t.h.dot(x) - y) > t.r * (1.0 + tol))
                ++violations;
        }
    }
    return violations;
}

MeasurementSchedule alternating_schedule(double r)
{
    return [r](int node, int step) {
        StripTemplate t;
        t.h = RowVector::Zero(2);
        t.h((node + step) % 2 == 0 ? 0 : 1) = 1.0;
        t.r = r;
        return t;
    };
}

Scenario rotating_target_scenario(const ScenarioOptions& options)
{
    if (!(options.q_scale >= 0.0) || !(options.r_scale > 0.0))
        throw std::invalid_argument("scenario: noise scales must be non-negative (process) and positive (measurement)");

    Scenario s;
    s.model.F.resize(2, 2);
    s.model.F << 0.992, -0.1247,
                 0.1247, 0.992;
    s.model.Q = kDefaultProcessNoise * options.q_scale * Matrix::Identity(2, 2);
    if (options.q_scale == 0.0)
        s.model.Q = Matrix(2, 0);
    s.model.n_nodes = options.n_nodes;
    s.model.schedule = alternating_schedule(kDefaultMeasurementNoise * options.r_scale);
    s.model.initial_set = Zonotope::box(Eigen::Vector2d(50.0, 0.0), Eigen::Vector2d(80.0, 80.0));
    s.model.true_initial_state = s.model.initial_set.center();
    s.neighbor_presets = {2, 4, 6};
    return s;
}

} // namespace dsbe
