#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "measure.hpp"
#include "simulator.hpp"

namespace boltz
{
//! Parse failure in a sample file; what() names the file and row
class LoadError : public std::runtime_error
{
  public:
    LoadError(std::string const& msg, std::size_t row)
        : std::runtime_error(msg), row_(row)
    {
    }
    //! 1-based line number, 0 when not tied to a line
    std::size_t row() const { return row_; }

  private:
    std::size_t row_;
};

//! Shortest round-trip decimal representation
std::string format_double(double x);

//! 64-bit FNV-1a
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t x);

//! Write to a temporary sibling and rename over \c path
void write_atomic(std::filesystem::path const& path, std::string const& content);

//! CSV with header t,vx,vy,vz
void write_snapshot_csv(std::filesystem::path const& path, Snapshot const& snap);

//! JSON sidecar {seed, config_hash, t, n, diagnostics}
void write_snapshot_sidecar(std::filesystem::path const& path,
                            Snapshot const& snap,
                            std::uint64_t seed,
                            std::string const& config_hash);

/*!
 * Stream a CSV with header t,vx,vy,vz or vx,vy,vz into a uniform-weight
 * measure. Empty files, header-only files and malformed rows raise
 * LoadError with the offending line number.
 */
EmpiricalMeasure load_samples(std::filesystem::path const& path);

//! Plain numeric table
void write_table(std::filesystem::path const& path,
                 std::vector<std::string> const& header,
                 std::vector<std::vector<double>> const& rows);

//! Flat x,y,z,value export of a grid
void write_grid_csv(std::filesystem::path const& path, GridDensity const& grid);

}  // namespace boltz
