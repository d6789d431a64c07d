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

#include "dsbe/intersection.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dsbe
{

namespace
{

constexpr double kMinRcond = 1e-12;

void check_strips(std::span<const Strip> strips, Eigen::Index n, const char* what)
{
    for (const Strip& s : strips)
        if (s.h.size() != n)
            throw std::invalid_argument(std::string(what) + ": strip row has length " + std::to_string(s.h.size()) +
                                        ", expected " + std::to_string(n));
}

} // namespace

Strip::Strip(RowVector h_, double y_, double r_) : h(std::move(h_)), y(y_), r(r_)
{
    if (!h.allFinite() || !std::isfinite(y) || !std::isfinite(r))
        throw std::invalid_argument("Strip: non-finite entry");
    if (h.size() == 0 || h.isZero(0.0))
        throw std::invalid_argument("Strip: measurement row must be nonzero");
    if (!(r > 0.0))
        throw std::invalid_argument("Strip: noise bound must be positive");
}

Matrix stack_rows(std::span<const Strip> strips)
{
    if (strips.empty())
        return Matrix(0, 0);
    Matrix gamma(static_cast<Eigen::Index>(strips.size()), strips.front().h.size());
    for (std::size_t j = 0; j < strips.size(); ++j)
        gamma.row(static_cast<Eigen::Index>(j)) = strips[j].h;
    return gamma;
}

Zonotope intersect_strips(const Zonotope& z, std::span<const Strip> strips, const StripGain& gain)
{
    const Eigen::Index n = z.dim();
    const auto m = static_cast<Eigen::Index>(strips.size());
    check_strips(strips, n, "intersect_strips");
    if (gain.lambda.rows() != n || gain.lambda.cols() != m)
        throw std::invalid_argument("intersect_strips: gain must be " + std::to_string(n) + "x" + std::to_string(m));

    Vector c = z.center();
    Matrix contraction = Matrix::Identity(n, n);
    Matrix G(n, z.num_generators() + m);
    for (Eigen::Index j = 0; j < m; ++j)
    {
        const Strip& s = strips[static_cast<std::size_t>(j)];
        const auto lam = gain.lambda.col(j);
        c += lam * (s.y - s.h.dot(z.center()));
        contraction -= lam * s.h;
        G.col(z.num_generators() + j) = lam * s.r;
    }
    G.leftCols(z.num_generators()) = contraction * z.generators();
    return Zonotope(std::move(c), std::move(G));
}

StripGain optimal_observer_gain(const Matrix& F, const Zonotope& prior, std::span<const Strip> strips)
{
    const Eigen::Index n = prior.dim();
    if (F.rows() != n || F.cols() != n)
        throw std::invalid_argument("optimal_observer_gain: F must be " + std::to_string(n) + "x" + std::to_string(n));
    check_strips(strips, n, "optimal_observer_gain");

    const auto m = static_cast<Eigen::Index>(strips.size());
    StripGain out;
    out.lambda = Matrix::Zero(n, m);
    if (m == 0 || prior.num_generators() == 0)
        return out;

    const Matrix gamma = stack_rows(strips);
    const Matrix gram = prior.generators() * prior.generators().transpose();
    const Matrix gamma_gram = gamma * gram; // m x n
    Matrix normal = gamma_gram * gamma.transpose();
    for (Eigen::Index j = 0; j < m; ++j)
        normal(j, j) += strips[static_cast<std::size_t>(j)].r * strips[static_cast<std::size_t>(j)].r;

    // Lambda^T = normal^-1 (Gamma G G^T F^T), normal is symmetric.
    const Matrix rhs = gamma_gram * F.transpose();
    Eigen::LDLT<Matrix> ldlt(normal);
    // LDLT's rcond() ignores zero pivots, so the pivot spread is checked as well.
    const Vector d = ldlt.vectorD().cwiseAbs();
    const bool well_posed = ldlt.info() == Eigen::Success && ldlt.isPositive() &&
                            d.minCoeff() > kMinRcond * d.maxCoeff() && ldlt.rcond() > kMinRcond;
    if (well_posed)
    {
        out.lambda = ldlt.solve(rhs).transpose();
    }
    else
    {
        out.lambda = normal.completeOrthogonalDecomposition().pseudoInverse() * rhs;
        out.lambda.transposeInPlace();
        out.used_pseudo_inverse = true;
    }
    return out;
}

StripGain optimal_strip_gain(const Zonotope& z, std::span<const Strip> strips)
{
    return optimal_observer_gain(Matrix::Identity(z.dim(), z.dim()), z, strips);
}

Zonotope intersect_zonotopes(std::span<const Zonotope> zs, const DiffusionWeights& weights)
{
    if (zs.empty())
        throw std::invalid_argument("intersect_zonotopes: no input sets");
    if (weights.w.size() != static_cast<Eigen::Index>(zs.size()))
        throw std::invalid_argument("intersect_zonotopes: " + std::to_string(weights.w.size()) + " weights for " +
                                    std::to_string(zs.size()) + " sets");
    const Eigen::Index n = zs.front().dim();
    Eigen::Index cols = 0;
    for (const Zonotope& z : zs)
    {
        if (z.dim() != n)
            throw std::invalid_argument("intersect_zonotopes: dimension mismatch");
        cols += z.num_generators();
    }
    const double total = weights.w.sum();
    if (total == 0.0 || !std::isfinite(total))
        throw std::invalid_argument("intersect_zonotopes: weights must have a nonzero finite sum");

    Vector c = Vector::Zero(n);
    Matrix G(n, cols);
    Eigen::Index offset = 0;
    for (std::size_t j = 0; j < zs.size(); ++j)
    {
        const double a = weights.w(static_cast<Eigen::Index>(j)) / total;
        c += a * zs[j].center();
        G.middleCols(offset, zs[j].num_generators()) = a * zs[j].generators();
        offset += zs[j].num_generators();
    }
    return Zonotope(std::move(c), std::move(G));
}

DiffusionWeights optimal_diffusion_weights(std::span<const Zonotope> zs)
{
    const auto m = static_cast<Eigen::Index>(zs.size());
    if (m == 0)
        throw std::invalid_argument("optimal_diffusion_weights: no input sets");
    DiffusionWeights out;
    if (m == 1)
    {
        out.w = Vector::Ones(1);
        return out;
    }

    Vector beta(m);
    Eigen::Index points = 0;
    for (Eigen::Index j = 0; j < m; ++j)
    {
        beta(j) = zs[static_cast<std::size_t>(j)].generators().squaredNorm();
        if (beta(j) == 0.0)
            ++points;
    }

    if (points > 0)
    {
        out.w = Vector::Zero(m);
        for (Eigen::Index j = 0; j < m; ++j)
            if (beta(j) == 0.0)
                out.w(j) = 1.0 / static_cast<double>(points);
        return out;
    }

    const double inv_sum = beta.cwiseInverse().sum();
    out.w.resize(m);
    for (Eigen::Index j = 0; j < m; ++j)
        out.w(j) = 1.0 / (beta(j) * inv_sum);
    return out;
}

} // namespace dsbe
