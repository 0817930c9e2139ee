#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "boltz/rng.hpp"
#include "boltz/vec3.hpp"

namespace boltz::test
{
inline Vec3 random_vec(CounterStream& rng, double scale = 1)
{
    return {scale * rng.normal(), scale * rng.normal(), scale * rng.normal()};
}

inline double rel_diff(double a, double b)
{
    double const s = std::max(std::abs(a), std::abs(b));
    return s == 0 ? 0 : std::abs(a - b) / s;
}

//! Scratch directory for file-producing tests
inline std::filesystem::path scratch(std::string const& name)
{
    char const* env = std::getenv("BOLTZ_TEST_TMP");
    std::filesystem::path base = env ? env : std::filesystem::temp_directory_path() / "boltz_test";
    auto dir = base / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace boltz::test
