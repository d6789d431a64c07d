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

#ifndef DSBE_IO_HPP_
#define DSBE_IO_HPP_

#include "dsbe/metrics.hpp"
#include "dsbe/network.hpp"
#include "dsbe/plant.hpp"
#include "dsbe/zonotope.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace dsbe
{

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// {"center": [..], "generators": [[row 0], [row 1], ...]} (row-major n x e).
nlohmann::json zonotope_to_json(const Zonotope& z);
Zonotope zonotope_from_json(const nlohmann::json& j);

/// {"n": 8, "neighbors": [[...], ...]}; the result is validated.
Topology topology_from_json(const nlohmann::json& j);
Topology load_topology_file(const std::filesystem::path& path);

/// Header: step,x1,..,xn,y0,..,y{N-1}
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
Trajectory read_trajectory_csv(std::istream& is, int state_dim = 2);

struct RunLabel
{
    std::string algorithm; ///< "sm" or "iv"
    bool diffusion = true;
    int k_neighbors = 0;   ///< -1 for a custom topology file
};

inline constexpr const char* kRecordsHeader =
    "step,node,algorithm,diffusion,k_neighbors,radius_m,center_err_m,lb_x,ub_x,lb_y,ub_y,step_time_us";
inline constexpr const char* kSummaryHeader = "algorithm,diffusion,k_neighbors,metric,mean,std";

void write_records_csv(std::ostream& os, const RunLabel& label, const std::vector<SimRecord>& records,
                       bool header = true);

struct LabeledRecord
{
    RunLabel label;
    SimRecord record;
};
std::vector<LabeledRecord> read_records_csv(std::istream& is);

struct SummaryRow
{
    RunLabel label;
    std::string metric;
    double mean = 0.0;
    double std = 0.0;
};

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows, bool header = true);
std::vector<SummaryRow> read_summary_csv(std::istream& is);

/// Writes via a temporary sibling file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

} // namespace dsbe

#endif
