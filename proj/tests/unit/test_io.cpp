#include <fstream>
#include <limits>

#include <doctest.h>

#include "boltz/io.hpp"
#include "test_util.hpp"

using namespace boltz;

namespace
{
std::filesystem::path write_text(std::filesystem::path const& path, std::string const& text)
{
    std::ofstream(path) << text;
    return path;
}

std::size_t error_row(std::filesystem::path const& path)
{
    try
    {
        load_samples(path);
    }
    catch (LoadError const& e)
    {
        return e.row();
    }
    return std::numeric_limits<std::size_t>::max();
}

}  // namespace

TEST_CASE("format_double round-trips")
{
    CounterStream rng(1, 0);
    for (int i = 0; i < 10000; ++i)
    {
        double const x = rng.normal() * std::pow(10.0, static_cast<int>(rng.below(40)) - 20);
        CHECK(std::stod(format_double(x)) == x);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-2) == "-2");
}

TEST_CASE("fnv1a64 known values")
{
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
    CHECK(hex64(0xabcull) == "0000000000000abc");
}

TEST_CASE("snapshot csv round-trip")
{
    auto const dir = test::scratch("io_roundtrip");
    CounterStream rng(2, 0);
    Snapshot snap;
    snap.t = 0.25;
    std::vector<Vec3> v;
    for (int i = 0; i < 500; ++i)
        v.push_back(test::random_vec(rng, 3));
    snap.measure = EmpiricalMeasure(v);
    write_snapshot_csv(dir / "s.csv", snap);
    EmpiricalMeasure const back = load_samples(dir / "s.csv");
    REQUIRE(back.size() == v.size());
    CHECK(std::equal(v.begin(), v.end(), back.samples().begin()));

    std::ifstream in(dir / "s.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,vx,vy,vz");
}

TEST_CASE("velocity-only files load")
{
    auto const dir = test::scratch("io_plain");
    auto const p = write_text(dir / "v.csv", "vx,vy,vz\n1,2,3\n\n-1, 0.5 ,2e-3\n");
    EmpiricalMeasure const m = load_samples(p);
    REQUIRE(m.size() == 2);
    CHECK(m.samples()[1] == Vec3{-1, 0.5, 2e-3});
}

TEST_CASE("malformed files report the row")
{
    auto const dir = test::scratch("io_errors");
    CHECK(error_row(write_text(dir / "empty.csv", "")) == 0);
    CHECK(error_row(write_text(dir / "header.csv", "t,vx,vy,vz\n")) == 1);
    CHECK(error_row(write_text(dir / "bad_header.csv", "a,b,c\n1,2,3\n")) == 1);
    CHECK(error_row(write_text(dir / "nan.csv", "vx,vy,vz\n1,2,3\n4,x,6\n")) == 3);
    CHECK(error_row(write_text(dir / "fields.csv", "t,vx,vy,vz\n0,1,2,3\n0,1,2,3\n0,1,2\n")) == 4);
    CHECK(error_row(write_text(dir / "inf.csv", "vx,vy,vz\ninf,0,0\n")) == 2);
    CHECK(error_row(dir / "missing.csv") == 0);

    try
    {
        load_samples(dir / "nan.csv");
        FAIL("expected LoadError");
    }
    catch (LoadError const& e)
    {
        std::string const msg = e.what();
        CHECK(msg.find("nan.csv:3: column 2: not a number: 'x'") != std::string::npos);
    }
}

TEST_CASE("large files stream")
{
    auto const dir = test::scratch("io_large");
    {
        std::ofstream out(dir / "big.csv");
        out << "vx,vy,vz\n";
        for (int i = 0; i < 1000000; ++i)
            out << i % 7 << ",0.5," << -i % 3 << '\n';
    }
    EmpiricalMeasure const m = load_samples(dir / "big.csv");
    CHECK(m.size() == 1000000);
    CHECK(m.samples().back() == Vec3{999999 % 7, 0.5, -(999999 % 3)});
}

TEST_CASE("write_atomic replaces content and leaves no temporary")
{
    auto const dir = test::scratch("io_atomic");
    write_atomic(dir / "f.txt", "one");
    write_atomic(dir / "f.txt", "two");
    std::ifstream in(dir / "f.txt");
    std::string s;
    std::getline(in, s);
    CHECK(s == "two");
    std::size_t files = 0;
    for (auto const& e : std::filesystem::directory_iterator(dir))
    {
        (void)e;
        ++files;
    }
    CHECK(files == 1);
}

TEST_CASE("tables")
{
    auto const dir = test::scratch("io_table");
    write_table(dir / "sub" / "t.csv", {"a", "b"}, {{1, 0.5}, {2, -3}});
    std::ifstream in(dir / "sub" / "t.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "a,b");
    std::getline(in, line);
    CHECK(line == "1,0.5");
}
