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

#ifndef DSBE_ZONOTOPE_HPP_
#define DSBE_ZONOTOPE_HPP_

#include <Eigen/Dense>

#include <vector>

namespace dsbe
{

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowVector = Eigen::RowVectorXd;
using Point2 = Eigen::Vector2d;

/**
 * @brief Zonotope <c, G> = { c + G*beta | beta in [-1, 1]^e }.
 *
 * The generator matrix is n x e; e = 0 is allowed and denotes the point {c}.
 * Values are immutable after construction and every entry is finite.
 */
class Zonotope
{
    public:
        Zonotope() = default;

        /// Throws std::invalid_argument on a row/length mismatch or non-finite entries.
        Zonotope(Vector center, Matrix generators);

        static Zonotope point(Vector center);

        /// Axis-aligned box with the given per-axis half widths (zero widths are skipped).
        static Zonotope box(Vector center, const Vector& half_widths);

        Eigen::Index dim() const { return center_.size(); }
        Eigen::Index num_generators() const { return generators_.cols(); }

        const Vector& center() const { return center_; }
        const Matrix& generators() const { return generators_; }

    private:
        Vector center_;
        Matrix generators_;
};

struct IntervalHull
{
    Vector lower;
    Vector upper;
};

inline constexpr double kDefaultMembershipTol = 1e-9;

/// Exact: <c1 + c2, [G1, G2]>.
Zonotope minkowski_sum(const Zonotope& a, const Zonotope& b);

/// Exact: <L c, L G>. L may be rectangular (m x n).
Zonotope linear_map(const Matrix& L, const Zonotope& z);

/// Frobenius norm of the generator matrix.
double f_radius(const Zonotope& z);

/**
 * @brief Girard order reduction to at most q generators.
 *
 * Zero generators are dropped. The q - n generators with the largest
 * ||g||_1 - ||g||_inf score are kept and the remainder is enclosed by an
 * axis-aligned box (n diagonal generators). The result always contains z.
 * Requires q >= n; z is returned unchanged when it already has <= q columns.
 */
Zonotope reduce(const Zonotope& z, Eigen::Index q);

IntervalHull interval_hull(const Zonotope& z);

/**
 * @brief Membership test: is there beta in [-1-tol, 1+tol]^e with c + G beta = x?
 *
 * Decided exactly by checking the halfspace of every facet normal (normals of
 * hyperplanes spanned by dim-1 generators). Rank-deficient generator matrices
 * are handled by projecting onto their range; an off-range component larger
 * than tol times the set scale means "outside".
 */
bool contains_point(const Zonotope& z, const Vector& x, double tol = kDefaultMembershipTol);

/**
 * @brief Counter-clockwise vertices of a 2-D zonotope (zonogon).
 *
 * Parallel generators are merged before the angular walk, so m distinct
 * directions give 2m vertices. A single direction gives the 2 segment
 * endpoints and a point set gives its center.
 */
std::vector<Point2> vertices_2d(const Zonotope& z);

} // namespace dsbe

#endif
