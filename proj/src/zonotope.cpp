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

#include "dsbe/zonotope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dsbe
{

namespace
{

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what)
{
    if (a != b)
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                                    " vs " + std::to_string(b) + ")");
}

// Indices of the columns that are not identically zero.
std::vector<Eigen::Index> nonzero_columns(const Matrix& G)
{
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < G.cols(); ++j)
        if (G.col(j).cwiseAbs().maxCoeff() > 0.0)
            idx.push_back(j);
    return idx;
}

Matrix select_columns(const Matrix& G, const std::vector<Eigen::Index>& idx)
{
    Matrix out(G.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k)
        out.col(static_cast<Eigen::Index>(k)) = G.col(idx[k]);
    return out;
}

// Unit normal of the hyperplane spanned by the columns of A (r x (r-1)), or
// an empty vector when those columns are linearly dependent.
Vector hyperplane_normal(const Matrix& A)
{
    const Eigen::Index r = A.rows();
    if (r == 2)
    {
        Vector u(2);
        u << -A(1, 0), A(0, 0);
        const double nrm = u.norm();
        if (nrm == 0.0)
            return {};
        return u / nrm;
    }
    Eigen::JacobiSVD<Matrix> svd(A.transpose(), Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    if (s.size() < r - 1 || s(r - 2) <= 1e-12 * std::max(1.0, s(0)))
        return {};
    return svd.matrixV().col(r - 1);
}

bool halfspace_ok(const Vector& u, const Vector& d, const Matrix& G, double scale)
{
    const double lhs = std::abs(u.dot(d));
    const double support = (u.transpose() * G).cwiseAbs().sum();
    return lhs <= scale * support + 64.0 * kEps * (lhs + support);
}

// Facet test for a generator matrix with full row rank r.
bool contains_full_rank(const Matrix& G, const Vector& d, double scale)
{
    const Eigen::Index r = G.rows();
    const Eigen::Index e = G.cols();
    if (r == 1)
        return std::abs(d(0)) <= scale * G.cwiseAbs().sum() + 64.0 * kEps * (std::abs(d(0)) + G.cwiseAbs().sum());

    // Enumerate (r-1)-subsets of generator columns.
    const Eigen::Index k = r - 1;
    std::vector<Eigen::Index> comb(static_cast<std::size_t>(k));
    std::iota(comb.begin(), comb.end(), Eigen::Index{0});
    Matrix A(r, k);
    while (true)
    {
        for (Eigen::Index t = 0; t < k; ++t)
            A.col(t) = G.col(comb[static_cast<std::size_t>(t)]);
        const Vector u = hyperplane_normal(A);
        if (u.size() != 0 && !halfspace_ok(u, d, G, scale))
            return false;

        Eigen::Index pos = k - 1;
        while (pos >= 0 && comb[static_cast<std::size_t>(pos)] == e - k + pos)
            --pos;
        if (pos < 0)
            break;
        ++comb[static_cast<std::size_t>(pos)];
        for (Eigen::Index t = pos + 1; t < k; ++t)
            comb[static_cast<std::size_t>(t)] = comb[static_cast<std::size_t>(t - 1)] + 1;
    }
    return true;
}

} // namespace

Zonotope::Zonotope(Vector center, Matrix generators)
    : center_(std::move(center)), generators_(std::move(generators))
{
    if (generators_.cols() == 0)
        generators_.resize(center_.size(), 0);
    if (generators_.rows() != center_.size())
        throw std::invalid_argument("Zonotope: generator rows (" + std::to_string(generators_.rows()) +
                                    ") do not match center length (" + std::to_string(center_.size()) + ")");
    if (!center_.allFinite() || !generators_.allFinite())
        throw std::invalid_argument("Zonotope: non-finite entry");
}

Zonotope Zonotope::point(Vector center)
{
    const Eigen::Index n = center.size();
    return Zonotope(std::move(center), Matrix(n, 0));
}

Zonotope Zonotope::box(Vector center, const Vector& half_widths)
{
    require_same_dim(center.size(), half_widths.size(), "Zonotope::box");
    std::vector<Eigen::Index> axes;
    for (Eigen::Index i = 0; i < half_widths.size(); ++i)
        if (half_widths(i) != 0.0)
            axes.push_back(i);
    Matrix G = Matrix::Zero(center.size(), static_cast<Eigen::Index>(axes.size()));
    for (std::size_t k = 0; k < axes.size(); ++k)
        G(axes[k], static_cast<Eigen::Index>(k)) = std::abs(half_widths(axes[k]));
    return Zonotope(std::move(center), std::move(G));
}

Zonotope minkowski_sum(const Zonotope& a, const Zonotope& b)
{
    require_same_dim(a.dim(), b.dim(), "minkowski_sum");
    Matrix G(a.dim(), a.num_generators() + b.num_generators());
    G << a.generators(), b.generators();
    return Zonotope(a.center() + b.center(), std::move(G));
}

Zonotope linear_map(const Matrix& L, const Zonotope& z)
{
    require_same_dim(L.cols(), z.dim(), "linear_map");
    return Zonotope(L * z.center(), L * z.generators());
}

double f_radius(const Zonotope& z)
{
    return z.generators().norm();
}

Zonotope reduce(const Zonotope& z, Eigen::Index q)
{
    const Eigen::Index n = z.dim();
    if (q < n)
        throw std::invalid_argument("reduce: order " + std::to_string(q) + " is below the dimension " +
                                    std::to_string(n));
    if (z.num_generators() <= q)
        return z;

    const Matrix G = select_columns(z.generators(), nonzero_columns(z.generators()));
    if (G.cols() <= q)
        return Zonotope(z.center(), G);

    const Eigen::Index e = G.cols();
    std::vector<double> score(static_cast<std::size_t>(e));
    for (Eigen::Index j = 0; j < e; ++j)
        score[static_cast<std::size_t>(j)] = G.col(j).lpNorm<1>() - G.col(j).lpNorm<Eigen::Infinity>();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(e));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return score[static_cast<std::size_t>(a)] > score[static_cast<std::size_t>(b)];
    });

    const auto keep = static_cast<std::size_t>(q - n);
    std::vector<Eigen::Index> kept(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep));
    std::sort(kept.begin(), kept.end());

    Vector box = Vector::Zero(n);
    for (std::size_t k = keep; k < order.size(); ++k)
        box += G.col(order[k]).cwiseAbs();

    Eigen::Index box_cols = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        if (box(i) > 0.0)
            ++box_cols;

    Matrix out = Matrix::Zero(n, static_cast<Eigen::Index>(kept.size()) + box_cols);
    Eigen::Index col = 0;
    for (Eigen::Index j : kept)
        out.col(col++) = G.col(j);
    for (Eigen::Index i = 0; i < n; ++i)
        if (box(i) > 0.0)
            out(i, col++) = box(i);
    return Zonotope(z.center(), std::move(out));
}

IntervalHull interval_hull(const Zonotope& z)
{
    const Vector radius = z.generators().cwiseAbs().rowwise().sum();
    return {z.center() - radius, z.center() + radius};
}

bool contains_point(const Zonotope& z, const Vector& x, double tol)
{
    require_same_dim(z.dim(), x.size(), "contains_point");
    if (tol < 0.0)
        throw std::invalid_argument("contains_point: negative tolerance");

    const double scale = 1.0 + tol;
    const Vector d = x - z.center();
    const Matrix G = select_columns(z.generators(), nonzero_columns(z.generators()));

    // Necessary condition: interval hull.
    const Vector hull = G.cwiseAbs().rowwise().sum();
    for (Eigen::Index i = 0; i < d.size(); ++i)
        if (std::abs(d(i)) > scale * hull(i) + 64.0 * kEps * (std::abs(d(i)) + hull(i) + std::abs(x(i))))
            return false;

    if (G.cols() == 0)
        return true; // passed the hull test with zero radius

    const double set_scale = std::max(hull.maxCoeff(), d.cwiseAbs().maxCoeff());
    Eigen::JacobiSVD<Matrix> svd(G, Eigen::ComputeFullU);
    const auto& s = svd.singularValues();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > 1e-10 * s(0))
            ++rank;

    if (rank == z.dim())
        return contains_full_rank(G, d, scale);

    const Matrix U = svd.matrixU().leftCols(rank);
    const Vector coords = U.transpose() * d;
    const Vector residual = d - U * coords;
    if (residual.norm() > std::max(tol, 1e-12) * set_scale)
        return false;
    return contains_full_rank(U.transpose() * G, coords, scale);
}

std::vector<Point2> vertices_2d(const Zonotope& z)
{
    if (z.dim() != 2)
        throw std::invalid_argument("vertices_2d: zonotope must be 2-dimensional, got " + std::to_string(z.dim()));

    // Orient every generator into the upper half plane [0, pi).
    std::vector<Point2> dirs;
    for (Eigen::Index j = 0; j < z.num_generators(); ++j)
    {
        Point2 g = z.generators().col(j);
        if (g.isZero(0.0))
            continue;
        if (g.y() < 0.0 || (g.y() == 0.0 && g.x() < 0.0))
            g = -g;
        dirs.push_back(g);
    }
    std::stable_sort(dirs.begin(), dirs.end(), [](const Point2& a, const Point2& b) {
        return std::atan2(a.y(), a.x()) < std::atan2(b.y(), b.x());
    });

    // Merge collinear neighbours.
    std::vector<Point2> merged;
    for (const Point2& g : dirs)
    {
        if (!merged.empty())
        {
            Point2& last = merged.back();
            const double cross = last.x() * g.y() - last.y() * g.x();
            if (std::abs(cross) <= 1e-12 * last.norm() * g.norm())
            {
                last += g;
                continue;
            }
        }
        merged.push_back(g);
    }

    const Point2 c = z.center();
    if (merged.empty())
        return {c};

    Point2 p = c;
    for (const Point2& g : merged)
        p -= g;

    std::vector<Point2> verts;
    verts.reserve(2 * merged.size());
    verts.push_back(p);
    for (const Point2& g : merged)
    {
        p += 2.0 * g;
        verts.push_back(p);
    }
    for (std::size_t k = 0; k + 1 < merged.size(); ++k)
    {
        p -= 2.0 * merged[k];
        verts.push_back(p);
    }
    return verts;
}

} // namespace dsbe
