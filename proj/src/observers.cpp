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

#include "dsbe/observers.hpp"

#include <stdexcept>
#include <string>

namespace dsbe
{

namespace
{

void require_strips(std::span<const Strip> strips, const char* what)
{
    if (strips.empty())
        throw std::invalid_argument(std::string(what) + ": at least one strip is required");
}

void check_model(const Matrix& F, const Matrix& Q, Eigen::Index n, const char* what)
{
    if (F.rows() != n || F.cols() != n)
        throw std::invalid_argument(std::string(what) + ": F must be " + std::to_string(n) + "x" + std::to_string(n));
    if (Q.cols() > 0 && Q.rows() != n)
        throw std::invalid_argument(std::string(what) + ": Q must have " + std::to_string(n) + " rows");
}

Matrix noise_generators(const Matrix& Q, Eigen::Index n)
{
    if (Q.cols() == 0)
        return Matrix(n, 0);
    return Q;
}

} // namespace

Zonotope sm_measurement_update(const NodeState& state, std::span<const Strip> strips)
{
    require_strips(strips, "sm_measurement_update");
    return intersect_strips(state.estimate, strips, optimal_strip_gain(state.estimate, strips));
}

Zonotope sm_diffusion_update(std::span<const Zonotope> shared, Eigen::Index q)
{
    return reduce(intersect_zonotopes(shared, optimal_diffusion_weights(shared)), q);
}

Zonotope sm_time_update(const Zonotope& z, const Matrix& F, const Matrix& Q)
{
    check_model(F, Q, z.dim(), "sm_time_update");
    return minkowski_sum(linear_map(F, z), Zonotope(Vector::Zero(z.dim()), noise_generators(Q, z.dim())));
}

Zonotope luenberger_propagate(const Zonotope& prior, std::span<const Strip> strips, const Matrix& F, const Matrix& Q,
                              const StripGain& gain)
{
    const Eigen::Index n = prior.dim();
    check_model(F, Q, n, "luenberger_propagate");
    const auto m = static_cast<Eigen::Index>(strips.size());
    if (gain.lambda.rows() != n || gain.lambda.cols() != m)
        throw std::invalid_argument("luenberger_propagate: gain must be " + std::to_string(n) + "x" +
                                    std::to_string(m));

    Matrix closed_loop = F;
    Vector injection = Vector::Zero(n);
    for (Eigen::Index j = 0; j < m; ++j)
    {
        const Strip& s = strips[static_cast<std::size_t>(j)];
        if (s.h.size() != n)
            throw std::invalid_argument("luenberger_propagate: strip dimension mismatch");
        closed_loop -= gain.lambda.col(j) * s.h;
        injection += gain.lambda.col(j) * s.y;
    }

    const Matrix Qn = noise_generators(Q, n);
    const Eigen::Index e = prior.num_generators();
    Matrix G(n, e + m + Qn.cols());
    G.leftCols(e) = closed_loop * prior.generators();
    for (Eigen::Index j = 0; j < m; ++j)
        G.col(e + j) = -gain.lambda.col(j) * strips[static_cast<std::size_t>(j)].r;
    G.rightCols(Qn.cols()) = Qn;
    return Zonotope(closed_loop * prior.center() + injection, std::move(G));
}

Zonotope iv_luenberger_update(const NodeState& state, std::span<const Strip> strips, const Matrix& F, const Matrix& Q,
                              Eigen::Index q)
{
    require_strips(strips, "iv_luenberger_update");
    const StripGain gain = optimal_observer_gain(F, state.estimate, strips);
    return reduce(luenberger_propagate(state.estimate, strips, F, Q, gain), q);
}

Zonotope iv_diffusion_update(std::span<const Zonotope> shared)
{
    return intersect_zonotopes(shared, optimal_diffusion_weights(shared));
}

Zonotope local_update(const NodeState& state, std::span<const Strip> strips, const ObserverConfig& cfg,
                      const Matrix& F, const Matrix& Q)
{
    if (cfg.q < state.estimate.dim())
        throw std::invalid_argument("observer: reduction order q must be >= the state dimension");
    if (cfg.kind == ObserverKind::SetMembership)
        return sm_measurement_update(state, strips);
    return iv_luenberger_update(state, strips, F, Q, cfg.q);
}

StepOutput diffusion_phase(int node_id, const Zonotope& own, std::span<const Zonotope> shared,
                           const ObserverConfig& cfg, const Matrix& F, const Matrix& Q)
{
    StepOutput out;
    out.next.node_id = node_id;
    if (cfg.kind == ObserverKind::SetMembership)
    {
        out.estimate = cfg.diffusion_enabled ? sm_diffusion_update(shared, cfg.q) : reduce(own, cfg.q);
        out.next.estimate = sm_time_update(out.estimate, F, Q);
    }
    else
    {
        out.estimate = cfg.diffusion_enabled ? iv_diffusion_update(shared) : own;
        out.next.estimate = out.estimate;
    }
    return out;
}

StepOutput step(const NodeState& state, const NeighborhoodInput& input, const ObserverConfig& cfg, const Matrix& F,
                const Matrix& Q)
{
    std::vector<Strip> strips;
    strips.reserve(input.strips.size());
    for (const NodeStrip& s : input.strips)
        strips.push_back(s.strip);

    const Zonotope own = local_update(state, strips, cfg, F, Q);

    std::vector<Zonotope> shared;
    shared.reserve(input.shared_sets.size() + 1);
    bool has_own = false;
    for (const NodeSet& s : input.shared_sets)
    {
        if (s.node_id == state.node_id)
        {
            shared.push_back(own);
            has_own = true;
        }
        else
        {
            shared.push_back(s.set);
        }
    }
    if (!has_own)
        shared.insert(shared.begin(), own);

    return diffusion_phase(state.node_id, own, shared, cfg, F, Q);
}

} // namespace dsbe
