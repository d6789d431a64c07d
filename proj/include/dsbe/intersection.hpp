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

#ifndef DSBE_INTERSECTION_HPP_
#define DSBE_INTERSECTION_HPP_

#include "dsbe/zonotope.hpp"

#include <span>
#include <vector>

namespace dsbe
{

/**
 * @brief Scalar measurement set { x : |h x - y| <= r }.
 *
 * Only p = 1 measurements are modelled; the gain formulas generalise to
 * p > 1 blocks by replacing r with an R matrix, which is not needed here.
 */
struct Strip
{
    Strip() = default;
    /// Throws std::invalid_argument if h is zero, r <= 0 or anything is non-finite.
    Strip(RowVector h, double y, double r);

    RowVector h;
    double y = 0.0;
    double r = 1.0;
};

/// Stacked gains Lambda = [lambda^1 ... lambda^m], one n x 1 column per strip.
struct StripGain
{
    Matrix lambda;
    /// Set when the normal matrix was too ill-conditioned for LDLT and a pseudo-inverse was used.
    bool used_pseudo_inverse = false;
};

struct DiffusionWeights
{
    Vector w;
};

/// Vertical stack of the strip rows (m x n).
Matrix stack_rows(std::span<const Strip> strips);

/**
 * Multi-strip over-approximation of z ∩ S_1 ∩ ... ∩ S_m:
 *   c' = c + sum_j lambda_j (y_j - h_j c)
 *   G' = [(I - sum_j lambda_j h_j) G, lambda_1 r_1, ..., lambda_m r_m]
 * Sound for every gain.
 */
Zonotope intersect_strips(const Zonotope& z, std::span<const Strip> strips, const StripGain& gain);

/**
 * Gain minimising the Frobenius norm of
 *   [(F - Lambda Gamma) G, -lambda_1 r_1, ..., -lambda_m r_m]
 * where Gamma = stack_rows(strips):
 *   Lambda = F G G^T Gamma^T (Gamma G G^T Gamma^T + diag(r_j^2))^-1.
 */
StripGain optimal_observer_gain(const Matrix& F, const Zonotope& prior, std::span<const Strip> strips);

/// optimal_observer_gain with F = I (the measurement-update gain).
StripGain optimal_strip_gain(const Zonotope& z, std::span<const Strip> strips);

/**
 * Weighted over-approximation of the intersection of m zonotopes:
 *   c = sum_j w_j c_j / sum_j w_j,   G = [w_1 G_1, ..., w_m G_m] / sum_j w_j.
 * Cost is O(n * sum_j e_j). Throws if sum_j w_j == 0 or on size mismatches.
 */
Zonotope intersect_zonotopes(std::span<const Zonotope> zs, const DiffusionWeights& weights);

/**
 * w_j = 1 / (beta_j * sum_r 1/beta_r) with beta_j = ||G_j||_F^2.
 * When some beta_j is zero, the point sets share the weight uniformly.
 */
DiffusionWeights optimal_diffusion_weights(std::span<const Zonotope> zs);

} // namespace dsbe

#endif
