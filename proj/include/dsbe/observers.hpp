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

#ifndef DSBE_OBSERVERS_HPP_
#define DSBE_OBSERVERS_HPP_

#include "dsbe/intersection.hpp"
#include "dsbe/zonotope.hpp"

#include <span>
#include <vector>

namespace dsbe
{

enum class ObserverKind
{
    SetMembership,
    IntervalBased,
};

inline constexpr Eigen::Index kDefaultReductionOrder = 20;

struct ObserverConfig
{
    ObserverKind kind = ObserverKind::SetMembership;
    Eigen::Index q = kDefaultReductionOrder;
    bool diffusion_enabled = true;
};

/// Per-node estimate carried between rounds.
///
/// Set-membership: the predicted set for the next measurement time.
/// Interval-based: the diffused set bounding the current state.
struct NodeState
{
    int node_id = 0;
    Zonotope estimate;
};

struct NodeStrip
{
    int node_id = 0;
    Strip strip;
};

struct NodeSet
{
    int node_id = 0;
    Zonotope set;
};

/// Everything a node receives from its neighbourhood (itself included) in one round.
struct NeighborhoodInput
{
    std::vector<NodeStrip> strips;
    std::vector<NodeSet> shared_sets;
};

struct StepOutput
{
    NodeState next;
    /// The set reported for the current round: it bounds the state the round's
    /// estimate refers to (after diffusion, before any time update).
    Zonotope estimate;
};

// Set-membership observer -------------------------------------------------

/// Intersection of the prior with all neighbourhood strips using the Frobenius-optimal gain.
Zonotope sm_measurement_update(const NodeState& state, std::span<const Strip> strips);

/// Optimal-weight intersection of the shared sets, reduced to q generators.
Zonotope sm_diffusion_update(std::span<const Zonotope> shared, Eigen::Index q);

/// F z ⊕ <0, Q>.
Zonotope sm_time_update(const Zonotope& z, const Matrix& F, const Matrix& Q);

// Interval-based (Luenberger) observer ------------------------------------

/**
 * One-step propagation for a given gain:
 *   c' = (F - Lambda Gamma) c + sum_j lambda_j y_j
 *   G' = [(F - Lambda Gamma) G, -lambda_1 r_1, ..., -lambda_m r_m, Q]
 * The result contains F x + n for every x in the prior consistent with the
 * strips and every n in <0, Q>.
 */
Zonotope luenberger_propagate(const Zonotope& prior, std::span<const Strip> strips, const Matrix& F, const Matrix& Q,
                              const StripGain& gain);

/// luenberger_propagate with the optimal gain, then reduced to q generators.
Zonotope iv_luenberger_update(const NodeState& state, std::span<const Strip> strips, const Matrix& F, const Matrix& Q,
                              Eigen::Index q);

/// Optimal-weight intersection of the shared sets (no reduction).
Zonotope iv_diffusion_update(std::span<const Zonotope> shared);

// Round phases --------------------------------------------------------------

/// Phase 1: measurement update (SM) or Luenberger update (IV).
Zonotope local_update(const NodeState& state, std::span<const Strip> strips, const ObserverConfig& cfg,
                      const Matrix& F, const Matrix& Q);

/**
 * Phase 2: diffusion (plus the time update for SM). `shared` holds the
 * corrected sets of the whole neighbourhood, the node's own set included.
 * With diffusion disabled only the node's own set is used.
 */
StepOutput diffusion_phase(int node_id, const Zonotope& own, std::span<const Zonotope> shared,
                           const ObserverConfig& cfg, const Matrix& F, const Matrix& Q);

/**
 * Full round for one node given already-received neighbourhood data. The
 * node's own entry in input.shared_sets is replaced by its freshly corrected set.
 */
StepOutput step(const NodeState& state, const NeighborhoodInput& input, const ObserverConfig& cfg, const Matrix& F,
                const Matrix& Q);

} // namespace dsbe

#endif
