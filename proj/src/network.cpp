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

#include "dsbe/network.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <string>

namespace dsbe
{

void Topology::validate() const
{
    if (n_nodes < 1)
        throw std::invalid_argument("topology: at least one node is required");
    if (static_cast<int>(neighbors.size()) != n_nodes)
        throw std::invalid_argument("topology: expected " + std::to_string(n_nodes) + " neighbour lists, got " +
                                    std::to_string(neighbors.size()));
    for (int i = 0; i < n_nodes; ++i)
    {
        const auto& nb = neighbors[static_cast<std::size_t>(i)];
        if (std::find(nb.begin(), nb.end(), i) == nb.end())
            throw std::invalid_argument("topology: node " + std::to_string(i) + " is missing from its own neighbourhood");
        std::vector<int> sorted = nb;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("topology: duplicate neighbour of node " + std::to_string(i));
        for (int j : nb)
        {
            if (j < 0 || j >= n_nodes)
                throw std::invalid_argument("topology: neighbour id " + std::to_string(j) + " out of range");
            const auto& back = neighbors[static_cast<std::size_t>(j)];
            if (std::find(back.begin(), back.end(), i) == back.end())
                throw std::invalid_argument("topology: edge " + std::to_string(i) + "-" + std::to_string(j) +
                                            " is not symmetric");
        }
    }
}

Topology ring_topology(int n, int k_neighbors)
{
    if (n < 1)
        throw std::invalid_argument("ring_topology: n must be >= 1");
    if (k_neighbors < 0 || k_neighbors >= n || k_neighbors % 2 != 0)
        throw std::invalid_argument("ring_topology: k_neighbors must be even and in [0, n), got " +
                                    std::to_string(k_neighbors));
    Topology t;
    t.n_nodes = n;
    t.neighbors.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
    {
        auto& nb = t.neighbors[static_cast<std::size_t>(i)];
        nb.push_back(i);
        for (int d = 1; d <= k_neighbors / 2; ++d)
        {
            nb.push_back((i - d + n) % n);
            nb.push_back((i + d) % n);
        }
    }
    return t;
}

RoundResult run_round(const Topology& topology, const std::vector<NodeState>& states,
                      const std::vector<Strip>& measurements, const ObserverConfig& cfg, const Matrix& F,
                      const Matrix& Q, int step, bool measure_time)
{
    using Clock = std::chrono::steady_clock;
    const auto n = static_cast<std::size_t>(topology.n_nodes);
    if (states.size() != n || measurements.size() != n)
        throw std::invalid_argument("run_round: expected one state and one measurement per node");

    RoundResult out;
    out.trace.step = step;
    out.trace.measurements.resize(n);
    out.trace.shared_sets.resize(n);
    std::vector<double> elapsed(n, 0.0);

    // Phase 1: measurement exchange, then local correction at every node.
    std::vector<Zonotope> corrected(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        auto& inbox = out.trace.measurements[i];
        std::vector<Strip> strips;
        for (int j : topology.neighbors[i])
        {
            inbox.push_back({j, measurements[static_cast<std::size_t>(j)]});
            strips.push_back(measurements[static_cast<std::size_t>(j)]);
        }
        const auto t0 = Clock::now();
        corrected[i] = local_update(states[i], strips, cfg, F, Q);
        elapsed[i] += std::chrono::duration<double, std::micro>(Clock::now() - t0).count();
    }

    // Phase 2: corrected-set exchange, then diffusion (+ time update).
    out.states.resize(n);
    out.estimates.resize(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        auto& inbox = out.trace.shared_sets[i];
        std::vector<Zonotope> shared;
        for (int j : topology.neighbors[i])
        {
            inbox.push_back({j, corrected[static_cast<std::size_t>(j)]});
            shared.push_back(corrected[static_cast<std::size_t>(j)]);
        }
        const auto t0 = Clock::now();
        StepOutput r = diffusion_phase(states[i].node_id, corrected[i], shared, cfg, F, Q);
        elapsed[i] += std::chrono::duration<double, std::micro>(Clock::now() - t0).count();
        out.states[i] = std::move(r.next);
        out.estimates[i] = std::move(r.estimate);
    }

    if (measure_time)
        out.node_time_us = std::move(elapsed);
    return out;
}

} // namespace dsbe
