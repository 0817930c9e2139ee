#include "boltz/io.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

namespace boltz
{
namespace
{
std::string trim(std::string_view s)
{
    auto const b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    auto const e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_commas(std::string const& line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true)
    {
        auto const pos = line.find(',', start);
        out.push_back(trim(std::string_view(line).substr(start, pos - start)));
        if (pos == std::string::npos)
            break;
        start = pos + 1;
    }
    return out;
}

double parse_field(std::string const& field,
                   std::filesystem::path const& path,
                   std::size_t row,
                   std::size_t column)
{
    double value = 0;
    auto const* first = field.data();
    auto const* last = field.data() + field.size();
    auto const [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || field.empty())
    {
        std::ostringstream os;
        os << path.string() << ":" << row << ": column " << column
           << ": not a number: '" << field << "'";
        throw LoadError(os.str(), row);
    }
    return value;
}

}  // namespace

std::string format_double(double x)
{
    std::array<char, 32> buf{};
    auto const [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc{})
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf.data(), ptr);
}

std::uint64_t fnv1a64(std::string_view data)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data)
    {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t x)
{
    std::array<char, 17> buf{};
    std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(x));
    return std::string(buf.data(), 16);
}

void write_atomic(std::filesystem::path const& path, std::string const& content)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out)
            throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_snapshot_csv(std::filesystem::path const& path, Snapshot const& snap)
{
    std::string out = "t,vx,vy,vz\n";
    std::string const t = format_double(snap.t);
    for (Vec3 const& v : snap.measure.samples())
    {
        out += t;
        for (double c : {v.x, v.y, v.z})
        {
            out += ',';
            out += format_double(c);
        }
        out += '\n';
    }
    write_atomic(path, out);
}

void write_snapshot_sidecar(std::filesystem::path const& path,
                            Snapshot const& snap,
                            std::uint64_t seed,
                            std::string const& config_hash)
{
    nlohmann::ordered_json j;
    j["seed"] = seed;
    j["config_hash"] = config_hash;
    j["t"] = snap.t;
    j["n"] = snap.measure.size();
    auto& d = j["diagnostics"];
    Vec3 const p = snap.diagnostics.momentum;
    d["momentum"] = {p.x, p.y, p.z};
    d["energy"] = snap.diagnostics.energy;
    auto& moments = d["moments"];
    moments = nlohmann::ordered_json::array();
    for (auto const& [order, value] : snap.diagnostics.moments)
        moments.push_back({{"p", order}, {"m_p", value}});
    write_atomic(path, j.dump(2) + "\n");
}

EmpiricalMeasure load_samples(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in)
        throw LoadError("cannot open " + path.string(), 0);
    std::string line;
    std::size_t row = 0;
    std::size_t offset = 0;
    bool have_header = false;
    std::vector<Vec3> samples;
    while (std::getline(in, line))
    {
        ++row;
        std::string const text = trim(line);
        if (text.empty())
            continue;
        auto const fields = split_commas(text);
        if (!have_header)
        {
            if (fields == std::vector<std::string>{"t", "vx", "vy", "vz"})
                offset = 1;
            else if (fields == std::vector<std::string>{"vx", "vy", "vz"})
                offset = 0;
            else
                throw LoadError(path.string() + ":" + std::to_string(row)
                                    + ": expected header t,vx,vy,vz or vx,vy,vz",
                                row);
            have_header = true;
            continue;
        }
        if (fields.size() != offset + 3)
        {
            std::ostringstream os;
            os << path.string() << ":" << row << ": expected " << offset + 3 << " fields, got "
               << fields.size();
            throw LoadError(os.str(), row);
        }
        for (std::size_t c = 0; c < offset; ++c)
            parse_field(fields[c], path, row, c + 1);
        Vec3 v{parse_field(fields[offset], path, row, offset + 1),
               parse_field(fields[offset + 1], path, row, offset + 2),
               parse_field(fields[offset + 2], path, row, offset + 3)};
        if (!is_finite(v))
            throw LoadError(path.string() + ":" + std::to_string(row) + ": non-finite velocity", row);
        samples.push_back(v);
    }
    if (!have_header)
        throw LoadError(path.string() + ": empty file", 0);
    if (samples.empty())
        throw LoadError(path.string() + ": header but no samples", row);
    return EmpiricalMeasure(std::move(samples));
}

void write_table(std::filesystem::path const& path,
                 std::vector<std::string> const& header,
                 std::vector<std::vector<double>> const& rows)
{
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i)
    {
        if (i)
            out += ',';
        out += header[i];
    }
    out += '\n';
    for (auto const& row : rows)
    {
        for (std::size_t i = 0; i < row.size(); ++i)
        {
            if (i)
                out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    write_atomic(path, out);
}

void write_grid_csv(std::filesystem::path const& path, GridDensity const& g)
{
    std::vector<std::vector<double>> rows;
    rows.reserve(g.values.size());
    for (int i = 0; i < g.grid.counts[0]; ++i)
        for (int j = 0; j < g.grid.counts[1]; ++j)
            for (int k = 0; k < g.grid.counts[2]; ++k)
            {
                Vec3 const c = g.grid.center(i, j, k);
                rows.push_back({c.x, c.y, c.z, g.at(i, j, k)});
            }
    write_table(path, {"x", "y", "z", "value"}, rows);
}

}  // namespace boltz
