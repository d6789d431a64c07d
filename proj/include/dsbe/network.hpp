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

#ifndef DSBE_NETWORK_HPP_
#define DSBE_NETWORK_HPP_

#include "dsbe/observers.hpp"

#include <vector>

namespace dsbe
{

/// Undirected neighbour graph; every neighbourhood lists the node itself first.
struct Topology
{
    int n_nodes = 0;
    std::vector<std::vector<int>> neighbors;

    /// Throws std::invalid_argument unless every list is self-inclusive, in range,
    /// duplicate-free and the adjacency is symmetric.
    void validate() const;
};

/// Circulant ring: node i is linked to i±1, ..., i±k/2 (mod n) and to itself.
Topology ring_topology(int n, int k_neighbors);

/// Payloads as delivered in one synchronous round.
struct RoundTrace
{
    int step = 0;
    std::vector<std::vector<NodeStrip>> measurements; ///< phase 1, per receiving node
    std::vector<std::vector<NodeSet>> shared_sets;    ///< phase 2, per receiving node
};

struct RoundResult
{
    std::vector<NodeState> states;
    std::vector<Zonotope> estimates;
    RoundTrace trace;
    /// Wall-clock microseconds spent on each node's computations; empty unless requested.
    std::vector<double> node_time_us;
};

/**
 * @brief One synchronous round over the whole network.
 *
 * Phase 1 delivers every node the strips of its neighbourhood and runs the
 * local update at all nodes; phase 2 delivers the corrected sets and runs
 * the diffusion phase. No phase-2 computation starts before every phase-1
 * result exists, so results do not depend on node processing order.
 *
 * `measurements[i]` is node i's own strip for this round.
 */
RoundResult run_round(const Topology& topology, const std::vector<NodeState>& states,
                      const std::vector<Strip>& measurements, const ObserverConfig& cfg, const Matrix& F,
                      const Matrix& Q, int step = 0, bool measure_time = false);

} // namespace dsbe

#endif
