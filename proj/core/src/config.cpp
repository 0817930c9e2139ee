#include "boltz/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace boltz
{
namespace
{
std::string trim(std::string const& s)
{
    auto const b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    auto const e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template<class T>
bool parse_number(std::string const& text, T& out)
{
    auto const* first = text.data();
    auto const* last = text.data() + text.size();
    auto const [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && !text.empty();
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string const& text, std::string source)
{
    KeyValueConfig cfg;
    cfg.source_ = std::move(source);
    std::istringstream in(text);
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line))
    {
        ++number;
        auto const hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::string const body = trim(line);
        if (body.empty())
            continue;
        auto const eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError(cfg.source_ + ":" + std::to_string(number)
                                  + ": expected 'key = value', got '" + body + "'",
                              number);
        std::string const key = trim(body.substr(0, eq));
        std::string const value = trim(body.substr(eq + 1));
        if (key.empty())
            throw ConfigError(cfg.source_ + ":" + std::to_string(number) + ": empty key", number);
        auto const [it, inserted] = cfg.entries_.emplace(key, Entry{value, number});
        if (!inserted)
            throw ConfigError(cfg.source_ + ":" + std::to_string(number) + ": duplicate key '" + key
                                  + "' (first set on line " + std::to_string(it->second.line) + ")",
                              number);
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string(), 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

void KeyValueConfig::fail(std::string const& key, std::string const& msg) const
{
    auto const it = entries_.find(key);
    std::size_t const line = it == entries_.end() ? 0 : it->second.line;
    std::string prefix = source_;
    if (line)
        prefix += ":" + std::to_string(line);
    throw ConfigError(prefix + ": " + key + ": " + msg, line);
}

std::string KeyValueConfig::get_string(std::string const& key, std::string const& fallback) const
{
    auto const it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second.value;
}

double KeyValueConfig::get_double(std::string const& key, double fallback) const
{
    auto const it = entries_.find(key);
    if (it == entries_.end())
        return fallback;
    double v = 0;
    if (!parse_number(it->second.value, v))
        fail(key, "expected a real number, got '" + it->second.value + "'");
    return v;
}

std::int64_t KeyValueConfig::get_int(std::string const& key, std::int64_t fallback) const
{
    auto const it = entries_.find(key);
    if (it == entries_.end())
        return fallback;
    std::int64_t v = 0;
    if (!parse_number(it->second.value, v))
        fail(key, "expected an integer, got '" + it->second.value + "'");
    return v;
}

std::uint64_t KeyValueConfig::get_u64(std::string const& key, std::uint64_t fallback) const
{
    auto const it = entries_.find(key);
    if (it == entries_.end())
        return fallback;
    std::uint64_t v = 0;
    if (!parse_number(it->second.value, v))
        fail(key, "expected a nonnegative integer, got '" + it->second.value + "'");
    return v;
}

bool KeyValueConfig::get_bool(std::string const& key, bool fallback) const
{
    auto const it = entries_.find(key);
    if (it == entries_.end())
        return fallback;
    std::string const& v = it->second.value;
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    fail(key, "expected true or false, got '" + v + "'");
}

std::vector<double> KeyValueConfig::get_list(std::string const& key,
                                             std::vector<double> const& fallback) const
{
    auto const it = entries_.find(key);
    if (it == entries_.end())
        return fallback;
    std::vector<double> out;
    std::string const& text = it->second.value;
    if (trim(text).empty())
        return out;
    std::size_t start = 0;
    while (true)
    {
        auto const pos = text.find(',', start);
        std::string const item = trim(text.substr(start, pos - start));
        double v = 0;
        if (!parse_number(item, v))
            fail(key, "expected a comma-separated list of reals, bad item '" + item + "'");
        out.push_back(v);
        if (pos == std::string::npos)
            break;
        start = pos + 1;
    }
    return out;
}

Vec3 KeyValueConfig::get_vec3(std::string const& key, Vec3 const& fallback) const
{
    if (!has(key))
        return fallback;
    auto const v = get_list(key, {});
    if (v.size() != 3)
        fail(key, "expected three comma-separated components");
    return {v[0], v[1], v[2]};
}

void KeyValueConfig::reject_unknown(std::set<std::string> const& allowed) const
{
    // Report in file order
    std::vector<std::pair<std::size_t, std::string>> unknown;
    for (auto const& [key, entry] : entries_)
        if (!allowed.count(key))
            unknown.emplace_back(entry.line, key);
    if (unknown.empty())
        return;
    std::sort(unknown.begin(), unknown.end());
    fail(unknown.front().second, "unknown key");
}

std::string KeyValueConfig::canonical() const
{
    std::string out;
    for (auto const& [key, entry] : entries_)
        out += key + "=" + entry.value + "\n";
    return out;
}

}  // namespace boltz
