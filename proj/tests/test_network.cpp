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

#include "dsbe/io.hpp"
#include "dsbe/network.hpp"
#include "dsbe/plant.hpp"

#include <doctest.h>

#include <algorithm>

using namespace dsbe;

namespace
{

std::vector<NodeState> initial_states(const Scenario& sc, ObserverKind kind, int n)
{
    const Zonotope z0 = kind == ObserverKind::SetMembership
                            ? sm_time_update(sc.model.initial_set, sc.model.F, sc.model.Q)
                            : sc.model.initial_set;
    std::vector<NodeState> states;
    for (int i = 0; i < n; ++i)
        states.push_back({i, z0});
    return states;
}

bool same_set(const Zonotope& a, const Zonotope& b)
{
    return a.center() == b.center() && a.generators() == b.generators();
}

// Runs `rounds` rounds with the strip of step k (SM) or k-1 (IV).
std::vector<RoundResult> run_rounds(const Scenario& sc, const Topology& topo, const Trajectory& traj,
                                    const ObserverConfig& cfg, int rounds)
{
    std::vector<NodeState> states = initial_states(sc, cfg.kind, topo.n_nodes);
    std::vector<RoundResult> out;
    for (int k = 1; k <= rounds; ++k)
    {
        const int t = cfg.kind == ObserverKind::SetMembership ? k : k - 1;
        out.push_back(run_round(topo, states, strips_at(sc.model, traj, t), cfg, sc.model.F, sc.model.Q, k));
        states = out.back().states;
    }
    return out;
}

} // namespace

TEST_SUITE("network")
{

TEST_CASE("ring topology sizes and membership")
{
    for (int k : {0, 2, 4, 6})
    {
        const Topology t = ring_topology(8, k);
        CHECK_NOTHROW(t.validate());
        for (int i = 0; i < 8; ++i)
        {
            const auto& nb = t.neighbors[static_cast<std::size_t>(i)];
            CHECK(nb.size() == static_cast<std::size_t>(k + 1));
            CHECK(nb.front() == i);
            for (int d = 1; d <= k / 2; ++d)
            {
                CHECK(std::count(nb.begin(), nb.end(), (i + d) % 8) == 1);
                CHECK(std::count(nb.begin(), nb.end(), (i - d + 8) % 8) == 1);
            }
        }
    }
    const Topology t2 = ring_topology(8, 2);
    CHECK(t2.neighbors[0] == std::vector<int>{0, 7, 1});

    CHECK_THROWS_AS(ring_topology(8, 3), std::invalid_argument);
    CHECK_THROWS_AS(ring_topology(8, 8), std::invalid_argument);
    CHECK_THROWS_AS(ring_topology(8, -2), std::invalid_argument);
    CHECK_THROWS_AS(ring_topology(0, 0), std::invalid_argument);
}

TEST_CASE("topology validation")
{
    Topology t{3, {{0, 1}, {1, 0}, {2}}};
    CHECK_NOTHROW(t.validate());
    CHECK_THROWS_AS((Topology{3, {{0, 1}, {1}, {2}}}.validate()), std::invalid_argument);       // asymmetric
    CHECK_THROWS_AS((Topology{3, {{1}, {1, 0}, {2}}}.validate()), std::invalid_argument);       // no self
    CHECK_THROWS_AS((Topology{3, {{0, 1, 1}, {1, 0}, {2}}}.validate()), std::invalid_argument); // duplicate
    CHECK_THROWS_AS((Topology{3, {{0, 3}, {1}, {2}}}.validate()), std::invalid_argument);       // out of range
    CHECK_THROWS_AS((Topology{3, {{0}, {1}}}.validate()), std::invalid_argument);               // missing list
}

TEST_CASE("topology from json")
{
    const auto j = nlohmann::json::parse(R"({"n": 3, "neighbors": [[1, 0], [0, 1, 2], [2, 1]]})");
    const Topology t = topology_from_json(j);
    CHECK(t.n_nodes == 3);
    CHECK(t.neighbors[0] == std::vector<int>{0, 1});
    CHECK(t.neighbors[1] == std::vector<int>{1, 0, 2});
    CHECK_THROWS_AS(topology_from_json(nlohmann::json::parse(R"({"n": 2, "neighbors": [[0, 1], [1]]})")),
                    std::invalid_argument);
    CHECK_THROWS(topology_from_json(nlohmann::json::parse(R"({"neighbors": [[0]]})")));
    CHECK_THROWS(load_topology_file("/nonexistent/topology.json"));
}

TEST_CASE("k = 0 is the standalone observer at every node")
{
    const Scenario sc = rotating_target_scenario();
    const Trajectory traj = simulate(sc.model, 30, 3);
    for (ObserverKind kind : {ObserverKind::SetMembership, ObserverKind::IntervalBased})
    {
        const ObserverConfig on{kind, 20, true}, off{kind, 20, false};
        const auto a = run_rounds(sc, ring_topology(8, 0), traj, on, 30);
        const auto b = run_rounds(sc, ring_topology(8, 0), traj, off, 30);

        // Standalone: each node only ever sees its own strip and its own set.
        for (int i = 0; i < 8; ++i)
        {
            NodeState s = initial_states(sc, kind, 1).front();
            s.node_id = i;
            for (int k = 1; k <= 30; ++k)
            {
                const int t = kind == ObserverKind::SetMembership ? k : k - 1;
                const std::vector<Strip> own{strips_at(sc.model, traj, t)[static_cast<std::size_t>(i)]};
                const Zonotope corrected = local_update(s, own, off, sc.model.F, sc.model.Q);
                const std::vector<Zonotope> shared{corrected};
                const StepOutput o = diffusion_phase(i, corrected, shared, off, sc.model.F, sc.model.Q);
                const auto& ea = a[static_cast<std::size_t>(k - 1)].estimates[static_cast<std::size_t>(i)];
                const auto& eb = b[static_cast<std::size_t>(k - 1)].estimates[static_cast<std::size_t>(i)];
                CHECK(same_set(eb, o.estimate));
                CHECK(ea.center().isApprox(o.estimate.center(), 1e-12));
                CHECK(f_radius(ea) == doctest::Approx(f_radius(o.estimate)).epsilon(1e-12));
                s = o.next;
            }
        }
    }
}

TEST_CASE("two fully connected nodes hold the same set after diffusion")
{
    const Scenario sc = rotating_target_scenario({1.0, 1.0, 2});
    const Trajectory traj = simulate(sc.model, 40, 9);
    const Topology both{2, {{0, 1}, {1, 0}}};
    for (ObserverKind kind : {ObserverKind::SetMembership, ObserverKind::IntervalBased})
    {
        const auto rounds = run_rounds(sc, both, traj, {kind, 20, true}, 40);
        for (const RoundResult& r : rounds)
        {
            CHECK(r.estimates[0].center().isApprox(r.estimates[1].center(), 1e-9));
            // Reduction breaks score ties by column order, which differs between the two nodes.
            const double tol = kind == ObserverKind::SetMembership ? 1e-2 : 1e-9;
            CHECK(f_radius(r.estimates[0]) == doctest::Approx(f_radius(r.estimates[1])).epsilon(tol));
            const IntervalHull h0 = interval_hull(r.estimates[0]), h1 = interval_hull(r.estimates[1]);
            CHECK(h0.lower.isApprox(h1.lower, 1e-9));
            CHECK(h0.upper.isApprox(h1.upper, 1e-9));
        }
    }
}

TEST_CASE("relabelling the nodes permutes the results")
{
    const Scenario sc = rotating_target_scenario();
    const Trajectory traj = simulate(sc.model, 25, 4);
    const std::vector<int> perm{3, 7, 0, 5, 1, 6, 2, 4}; // old id -> new id
    for (ObserverKind kind : {ObserverKind::SetMembership, ObserverKind::IntervalBased})
    {
        const ObserverConfig cfg{kind, 20, true};
        const Topology topo = ring_topology(8, 4);
        Topology relabeled{8, std::vector<std::vector<int>>(8)};
        for (int i = 0; i < 8; ++i)
            for (int j : topo.neighbors[static_cast<std::size_t>(i)])
                relabeled.neighbors[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])].push_back(
                    perm[static_cast<std::size_t>(j)]);
        relabeled.validate();

        std::vector<NodeState> a = initial_states(sc, kind, 8), b = a;
        for (int k = 1; k <= 25; ++k)
        {
            const int t = kind == ObserverKind::SetMembership ? k : k - 1;
            const std::vector<Strip> ya = strips_at(sc.model, traj, t);
            std::vector<Strip> yb = ya;
            for (int i = 0; i < 8; ++i)
                yb[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = ya[static_cast<std::size_t>(i)];
            const RoundResult ra = run_round(topo, a, ya, cfg, sc.model.F, sc.model.Q, k);
            const RoundResult rb = run_round(relabeled, b, yb, cfg, sc.model.F, sc.model.Q, k);
            for (int i = 0; i < 8; ++i)
                CHECK(same_set(ra.estimates[static_cast<std::size_t>(i)],
                               rb.estimates[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]));
            a = ra.states;
            b = rb.states;
        }
    }
}

TEST_CASE("round results do not depend on the order nodes are processed in")
{
    const Scenario sc = rotating_target_scenario();
    const Trajectory traj = simulate(sc.model, 15, 6);
    const Topology topo = ring_topology(8, 6);
    for (ObserverKind kind : {ObserverKind::SetMembership, ObserverKind::IntervalBased})
    {
        const ObserverConfig cfg{kind, 20, true};
        std::vector<NodeState> states = initial_states(sc, kind, 8);
        for (int k = 1; k <= 15; ++k)
        {
            const int t = kind == ObserverKind::SetMembership ? k : k - 1;
            const std::vector<Strip> y = strips_at(sc.model, traj, t);
            const RoundResult r = run_round(topo, states, y, cfg, sc.model.F, sc.model.Q, k);

            // Phase 1 in reverse node order, phase 2 in a shuffled order, via step().
            std::vector<Zonotope> corrected(8);
            for (int i = 7; i >= 0; --i)
            {
                std::vector<Strip> mine;
                for (int j : topo.neighbors[static_cast<std::size_t>(i)])
                    mine.push_back(y[static_cast<std::size_t>(j)]);
                corrected[static_cast<std::size_t>(i)] =
                    local_update(states[static_cast<std::size_t>(i)], mine, cfg, sc.model.F, sc.model.Q);
            }
            for (int i : {5, 2, 7, 0, 3, 6, 1, 4})
            {
                NeighborhoodInput in;
                for (int j : topo.neighbors[static_cast<std::size_t>(i)])
                {
                    in.strips.push_back({j, y[static_cast<std::size_t>(j)]});
                    in.shared_sets.push_back({j, corrected[static_cast<std::size_t>(j)]});
                }
                const StepOutput o = step(states[static_cast<std::size_t>(i)], in, cfg, sc.model.F, sc.model.Q);
                CHECK(same_set(o.estimate, r.estimates[static_cast<std::size_t>(i)]));
                CHECK(same_set(o.next.estimate, r.states[static_cast<std::size_t>(i)].estimate));
            }

            // The trace records exactly what each node received.
            for (int i = 0; i < 8; ++i)
            {
                const auto& nb = topo.neighbors[static_cast<std::size_t>(i)];
                REQUIRE(r.trace.measurements[static_cast<std::size_t>(i)].size() == nb.size());
                REQUIRE(r.trace.shared_sets[static_cast<std::size_t>(i)].size() == nb.size());
                for (std::size_t p = 0; p < nb.size(); ++p)
                {
                    CHECK(r.trace.measurements[static_cast<std::size_t>(i)][p].node_id == nb[p]);
                    CHECK(same_set(r.trace.shared_sets[static_cast<std::size_t>(i)][p].set,
                                   corrected[static_cast<std::size_t>(nb[p])]));
                }
            }
            states = r.states;
        }
    }
}

TEST_CASE("rounds are deterministic and timing is opt-in")
{
    const Scenario sc = rotating_target_scenario();
    const Trajectory traj = simulate(sc.model, 10, 8);
    const ObserverConfig cfg{ObserverKind::SetMembership, 20, true};
    const auto a = run_rounds(sc, ring_topology(8, 4), traj, cfg, 10);
    const auto b = run_rounds(sc, ring_topology(8, 4), traj, cfg, 10);
    for (std::size_t k = 0; k < a.size(); ++k)
        for (std::size_t i = 0; i < 8; ++i)
            CHECK(same_set(a[k].estimates[i], b[k].estimates[i]));
    CHECK(a.front().node_time_us.empty());

    const auto states = initial_states(sc, cfg.kind, 8);
    const RoundResult timed =
        run_round(ring_topology(8, 4), states, strips_at(sc.model, traj, 1), cfg, sc.model.F, sc.model.Q, 1, true);
    REQUIRE(timed.node_time_us.size() == 8);
    for (double t : timed.node_time_us)
        CHECK(t >= 0.0);
    CHECK(same_set(timed.estimates[3], a.front().estimates[3]));

    const std::vector<Strip> too_few = strips_at(sc.model, traj, 1);
    CHECK_THROWS_AS(run_round(ring_topology(8, 4), states, {too_few.begin(), too_few.begin() + 3}, cfg, sc.model.F,
                              sc.model.Q),
                    std::invalid_argument);
}

} // TEST_SUITE
