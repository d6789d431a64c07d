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

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dsbe
{

namespace
{

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ','))
        out.push_back(field);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

double parse_double(const std::string& s)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::runtime_error("csv: cannot parse number '" + s + "'");
    return v;
}

int parse_int(const std::string& s)
{
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::runtime_error("csv: cannot parse integer '" + s + "'");
    return v;
}

bool next_data_line(std::istream& is, std::string& line)
{
    while (std::getline(is, line))
    {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (!line.empty())
            return true;
    }
    return false;
}

} // namespace

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

nlohmann::json zonotope_to_json(const Zonotope& z)
{
    nlohmann::json j;
    j["center"] = std::vector<double>(z.center().data(), z.center().data() + z.dim());
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < z.dim(); ++i)
    {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index k = 0; k < z.num_generators(); ++k)
            row.push_back(z.generators()(i, k));
        rows.push_back(std::move(row));
    }
    j["generators"] = std::move(rows);
    return j;
}

Zonotope zonotope_from_json(const nlohmann::json& j)
{
    const auto c = j.at("center").get<std::vector<double>>();
    const auto& rows = j.at("generators");
    if (!rows.is_array() || rows.size() != c.size())
        throw std::invalid_argument("zonotope json: generators must have one row per center entry");
    const std::size_t e = rows.empty() ? 0 : rows.front().size();
    Matrix G(static_cast<Eigen::Index>(c.size()), static_cast<Eigen::Index>(e));
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        const auto row = rows[i].get<std::vector<double>>();
        if (row.size() != e)
            throw std::invalid_argument("zonotope json: ragged generator rows");
        for (std::size_t k = 0; k < e; ++k)
            G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = row[k];
    }
    return Zonotope(Eigen::Map<const Vector>(c.data(), static_cast<Eigen::Index>(c.size())), std::move(G));
}

Topology topology_from_json(const nlohmann::json& j)
{
    Topology t;
    t.n_nodes = j.at("n").get<int>();
    t.neighbors = j.at("neighbors").get<std::vector<std::vector<int>>>();
    // Put each node first in its own list, keep the rest in file order.
    for (int i = 0; i < static_cast<int>(t.neighbors.size()); ++i)
    {
        auto& nb = t.neighbors[static_cast<std::size_t>(i)];
        auto it = std::find(nb.begin(), nb.end(), i);
        if (it != nb.end())
            std::rotate(nb.begin(), it, it + 1);
    }
    t.validate();
    return t;
}

Topology load_topology_file(const std::filesystem::path& path)
{
    return topology_from_json(nlohmann::json::parse(read_file(path)));
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj)
{
    if (traj.states.empty())
        throw std::invalid_argument("trajectory csv: empty trajectory");
    const Eigen::Index n = traj.states.front().size();
    os << "step";
    for (Eigen::Index i = 0; i < n; ++i)
        os << ",x" << (i + 1);
    for (int i = 0; i < traj.n_nodes(); ++i)
        os << ",y" << i;
    os << '\n';
    for (std::size_t k = 0; k < traj.states.size(); ++k)
    {
        os << k;
        for (Eigen::Index i = 0; i < n; ++i)
            os << ',' << format_double(traj.states[k](i));
        for (double y : traj.measurements[k])
            os << ',' << format_double(y);
        os << '\n';
    }
}

Trajectory read_trajectory_csv(std::istream& is, int state_dim)
{
    std::string line;
    if (!next_data_line(is, line))
        throw std::runtime_error("trajectory csv: missing header");
    const auto header = split_csv_line(line);
    const int n_nodes = static_cast<int>(header.size()) - 1 - state_dim;
    if (header.empty() || header.front() != "step" || n_nodes < 1)
        throw std::runtime_error("trajectory csv: unexpected header '" + line + "'");

    Trajectory traj;
    int expected = 0;
    while (next_data_line(is, line))
    {
        const auto f = split_csv_line(line);
        if (f.size() != header.size())
            throw std::runtime_error("trajectory csv: row " + std::to_string(expected) + " has " +
                                     std::to_string(f.size()) + " fields");
        if (parse_int(f[0]) != expected)
            throw std::runtime_error("trajectory csv: steps must be consecutive from 0");
        Vector x(state_dim);
        for (int i = 0; i < state_dim; ++i)
            x(i) = parse_double(f[static_cast<std::size_t>(1 + i)]);
        std::vector<double> ys(static_cast<std::size_t>(n_nodes));
        for (int i = 0; i < n_nodes; ++i)
            ys[static_cast<std::size_t>(i)] = parse_double(f[static_cast<std::size_t>(1 + state_dim + i)]);
        traj.states.push_back(std::move(x));
        traj.measurements.push_back(std::move(ys));
        ++expected;
    }
    if (traj.states.size() < 2)
        throw std::runtime_error("trajectory csv: at least two rows (steps 0 and 1) are required");
    return traj;
}

void write_records_csv(std::ostream& os, const RunLabel& label, const std::vector<SimRecord>& records, bool header)
{
    if (header)
        os << kRecordsHeader << '\n';
    const std::string prefix =
        label.algorithm + ',' + (label.diffusion ? "1" : "0") + ',' + std::to_string(label.k_neighbors) + ',';
    for (const SimRecord& r : records)
    {
        os << r.step << ',' << r.node << ',' << prefix << format_double(r.radius) << ','
           << format_double(r.center_error) << ',' << format_double(r.lb_x) << ',' << format_double(r.ub_x) << ','
           << format_double(r.lb_y) << ',' << format_double(r.ub_y) << ',' << format_double(r.step_time_us) << '\n';
    }
}

std::vector<LabeledRecord> read_records_csv(std::istream& is)
{
    std::string line;
    if (!next_data_line(is, line) || line != kRecordsHeader)
        throw std::runtime_error("records csv: unexpected header");
    std::vector<LabeledRecord> out;
    while (next_data_line(is, line))
    {
        const auto f = split_csv_line(line);
        if (f.size() != 12)
            throw std::runtime_error("records csv: expected 12 fields, got " + std::to_string(f.size()));
        LabeledRecord lr;
        lr.record.step = parse_int(f[0]);
        lr.record.node = parse_int(f[1]);
        lr.label.algorithm = f[2];
        lr.label.diffusion = parse_int(f[3]) != 0;
        lr.label.k_neighbors = parse_int(f[4]);
        lr.record.radius = parse_double(f[5]);
        lr.record.center_error = parse_double(f[6]);
        lr.record.lb_x = parse_double(f[7]);
        lr.record.ub_x = parse_double(f[8]);
        lr.record.lb_y = parse_double(f[9]);
        lr.record.ub_y = parse_double(f[10]);
        lr.record.step_time_us = parse_double(f[11]);
        out.push_back(std::move(lr));
    }
    return out;
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows, bool header)
{
    if (header)
        os << kSummaryHeader << '\n';
    for (const SummaryRow& r : rows)
        os << r.label.algorithm << ',' << (r.label.diffusion ? 1 : 0) << ',' << r.label.k_neighbors << ',' << r.metric
           << ',' << format_double(r.mean) << ',' << format_double(r.std) << '\n';
}

std::vector<SummaryRow> read_summary_csv(std::istream& is)
{
    std::string line;
    if (!next_data_line(is, line) || line != kSummaryHeader)
        throw std::runtime_error("summary csv: unexpected header");
    std::vector<SummaryRow> out;
    while (next_data_line(is, line))
    {
        const auto f = split_csv_line(line);
        if (f.size() != 6)
            throw std::runtime_error("summary csv: expected 6 fields");
        SummaryRow r;
        r.label.algorithm = f[0];
        r.label.diffusion = parse_int(f[1]) != 0;
        r.label.k_neighbors = parse_int(f[2]);
        r.metric = f[3];
        r.mean = f[4] == "nan" ? std::numeric_limits<double>::quiet_NaN() : parse_double(f[4]);
        r.std = f[5] == "nan" ? std::numeric_limits<double>::quiet_NaN() : parse_double(f[5]);
        out.push_back(std::move(r));
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os)
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        os << contents;
        if (!os.flush())
            throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace dsbe
