#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "vec3.hpp"

namespace boltz
{
//! Configuration error; what() is prefixed with "<source>:<line>:" when known
class ConfigError : public std::runtime_error
{
  public:
    ConfigError(std::string const& msg, std::size_t line)
        : std::runtime_error(msg), line_(line)
    {
    }
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

/*!
 * Parsed key = value file.
 *
 * One assignment per line, '#' starts a comment, blank lines are skipped,
 * duplicate keys are an error. Typed getters report the line of the
 * offending value.
 */
class KeyValueConfig
{
  public:
    struct Entry
    {
        std::string value;
        std::size_t line;
    };

    static KeyValueConfig parse(std::string const& text, std::string source = "<string>");
    static KeyValueConfig load(std::filesystem::path const& path);

    bool has(std::string const& key) const { return entries_.count(key) != 0; }
    std::map<std::string, Entry> const& entries() const { return entries_; }
    std::string const& source() const { return source_; }

    std::string get_string(std::string const& key, std::string const& fallback) const;
    double get_double(std::string const& key, double fallback) const;
    std::int64_t get_int(std::string const& key, std::int64_t fallback) const;
    std::uint64_t get_u64(std::string const& key, std::uint64_t fallback) const;
    bool get_bool(std::string const& key, bool fallback) const;
    //! Comma-separated reals
    std::vector<double> get_list(std::string const& key, std::vector<double> const& fallback) const;
    //! Three comma-separated reals
    Vec3 get_vec3(std::string const& key, Vec3 const& fallback) const;

    //! Throws ConfigError at the first key outside \c allowed
    void reject_unknown(std::set<std::string> const& allowed) const;

    //! Error anchored at the line of \c key
    [[noreturn]] void fail(std::string const& key, std::string const& msg) const;

    //! Canonical "key=value" lines in key order, for hashing
    std::string canonical() const;

  private:
    std::map<std::string, Entry> entries_;
    std::string source_;
};

}  // namespace boltz
