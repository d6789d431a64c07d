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

#include "dsbe/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace dsbe
{

Stat mean_std(std::span<const double> values)
{
    Stat s;
    s.count = values.size();
    if (values.empty())
        return s;
    double sum = 0.0;
    for (double v : values)
        sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1)
    {
        double ss = 0.0;
        for (double v : values)
            ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

double radius(const Zonotope& z, RadiusKind kind)
{
    if (kind == RadiusKind::Frobenius)
        return f_radius(z);
    const IntervalHull hull = interval_hull(z);
    return 0.5 * (hull.upper - hull.lower).norm();
}

double hausdorff_points(std::span<const Point2> a, std::span<const Point2> b)
{
    auto directed = [](std::span<const Point2> from, std::span<const Point2> to) {
        double worst = 0.0;
        for (const Point2& p : from)
        {
            double best = std::numeric_limits<double>::infinity();
            for (const Point2& q : to)
                best = std::min(best, (p - q).norm());
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

double hausdorff_2d(const Zonotope& a, const Zonotope& b)
{
    const auto va = vertices_2d(a);
    const auto vb = vertices_2d(b);
    return hausdorff_points(va, vb);
}

std::vector<double> pairwise_hausdorff(std::span<const Zonotope> sets)
{
    std::vector<std::vector<Point2>> verts;
    verts.reserve(sets.size());
    for (const Zonotope& z : sets)
        verts.push_back(vertices_2d(z));
    std::vector<double> out;
    for (std::size_t i = 0; i < verts.size(); ++i)
        for (std::size_t j = i + 1; j < verts.size(); ++j)
            out.push_back(hausdorff_points(verts[i], verts[j]));
    return out;
}

SimRecord make_record(int step, int node, const Zonotope& estimate, const Vector& truth, RadiusKind kind)
{
    SimRecord r;
    r.step = step;
    r.node = node;
    r.radius_frobenius = radius(estimate, RadiusKind::Frobenius);
    r.radius_half_diagonal = radius(estimate, RadiusKind::HalfDiagonal);
    r.radius = kind == RadiusKind::Frobenius ? r.radius_frobenius : r.radius_half_diagonal;
    r.center_error = (estimate.center() - truth).norm();
    const IntervalHull hull = interval_hull(estimate);
    r.lb_x = hull.lower(0);
    r.ub_x = hull.upper(0);
    if (estimate.dim() > 1)
    {
        r.lb_y = hull.lower(1);
        r.ub_y = hull.upper(1);
    }
    return r;
}

RunSummary summarize(std::span<const SimRecord> records, std::span<const StepHausdorff> hausdorff, int burn_in)
{
    if (records.empty())
        throw std::invalid_argument("summarize: no records");

    struct Bucket
    {
        std::vector<double> radius, center_error;
    };
    std::map<int, Bucket> by_step;
    std::vector<double> all_radius, all_error, all_rf, all_rh, all_hd;
    for (const SimRecord& r : records)
    {
        Bucket& b = by_step[r.step];
        b.radius.push_back(r.radius);
        b.center_error.push_back(r.center_error);
        if (r.step > burn_in)
        {
            all_radius.push_back(r.radius);
            all_error.push_back(r.center_error);
            all_rf.push_back(r.radius_frobenius);
            all_rh.push_back(r.radius_half_diagonal);
        }
    }
    std::map<int, const StepHausdorff*> hd_by_step;
    for (const StepHausdorff& h : hausdorff)
    {
        hd_by_step[h.step] = &h;
        if (h.step > burn_in)
            all_hd.insert(all_hd.end(), h.distances.begin(), h.distances.end());
    }

    RunSummary out;
    for (const auto& [step, b] : by_step)
    {
        StepSummary s;
        s.step = step;
        s.radius = mean_std(b.radius);
        s.center_error = mean_std(b.center_error);
        if (auto it = hd_by_step.find(step); it != hd_by_step.end())
            s.hausdorff = mean_std(it->second->distances);
        out.steps.push_back(s);
    }
    out.radius = mean_std(all_radius);
    out.center_error = mean_std(all_error);
    out.hausdorff = mean_std(all_hd);
    out.radius_frobenius = mean_std(all_rf);
    out.radius_half_diagonal = mean_std(all_rh);
    return out;
}

} // namespace dsbe
