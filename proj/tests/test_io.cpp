#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kaczmarz/generator.hpp"
#include "kaczmarz/io.hpp"
#include "support.hpp"

using namespace kaczmarz;
using namespace testsupport;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& name)
        : path(std::filesystem::temp_directory_path() / name) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("matrix market array round trip is exact") {
    SplitMix64 rng(1);
    const auto A = random_matrix(5, 3, rng);
    std::stringstream buf;
    write_matrix_market(buf, A, MatrixMarketFormat::Array);
    const auto B = read_matrix_market(buf);
    REQUIRE(B.rows() == 5);
    REQUIRE(B.cols() == 3);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 3; ++j) CHECK(B.entry(i, j) == A.entry(i, j));
}

TEST_CASE("matrix market coordinate round trip is exact") {
    const auto A = DenseMatrix::from_rows({{1.5, 0.0}, {0.0, -2.25}, {1.0 / 3.0, 4e-17}});
    std::stringstream buf;
    write_matrix_market(buf, A, MatrixMarketFormat::Coordinate);
    const auto B = read_matrix_market(buf);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) CHECK(B.entry(i, j) == A.entry(i, j));
}

TEST_CASE("matrix market writer is byte-stable") {
    SplitMix64 rng(2);
    const auto A = random_matrix(4, 4, rng);
    std::stringstream one, two;
    write_matrix_market(one, A);
    write_matrix_market(two, A);
    CHECK(one.str() == two.str());
}

TEST_CASE("matrix market reader rejects malformed input") {
    {
        std::stringstream buf("%%MatrixMarket matrix array complex general\n2 2\n");
        CHECK_THROWS_AS(read_matrix_market(buf), std::runtime_error);
    }
    {
        std::stringstream buf("not a header\n");
        CHECK_THROWS_AS(read_matrix_market(buf), std::runtime_error);
    }
    {
        std::stringstream buf("%%MatrixMarket matrix array real general\n2 2\n1.0\n");
        CHECK_THROWS_AS(read_matrix_market(buf), std::runtime_error);
    }
    {
        std::stringstream buf("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 5.0\n");
        CHECK_THROWS_AS(read_matrix_market(buf), std::runtime_error);
    }
}

TEST_CASE("array format entries are column-major") {
    std::stringstream buf("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n");
    const auto A = read_matrix_market(buf);
    CHECK(A.entry(0, 0) == 1.0);
    CHECK(A.entry(1, 0) == 2.0);
    CHECK(A.entry(0, 1) == 3.0);
    CHECK(A.entry(1, 1) == 4.0);
}

TEST_CASE("vector file round trip") {
    TempDir dir("kaczmarz_io_test_vec");
    const std::vector<double> v{1.0 / 3.0, -7.25e-12, 2.0};
    write_vector_file(dir.file("v.txt"), v);
    const auto w = read_vector_file(dir.file("v.txt"));
    REQUIRE(w.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(w[i] == v[i]);

    std::ofstream bad(dir.file("bad.txt"));
    bad << "1.5 oops\n";
    bad.close();
    CHECK_THROWS_AS(read_vector_file(dir.file("bad.txt")), std::runtime_error);
}

TEST_CASE("schedule file round trip") {
    TempDir dir("kaczmarz_io_test_sched");
    write_schedule_file(dir.file("s.txt"), {1, 2, 1, 3}, {2, 1});
    const auto [rows, cols] = read_schedule_file(dir.file("s.txt"));
    CHECK(rows == std::vector<int>{1, 2, 1, 3});
    CHECK(cols == std::vector<int>{2, 1});
}

TEST_CASE("history csv schema is stable") {
    std::vector<IterationRecord> history(2);
    history[0].k = 1;
    history[0].col_index = 2;
    history[0].row_index = 3;
    history[0].y_err = 0.5;
    history[0].gamma_norm = 0.25;
    history[0].x_err_fixed = 1.0;
    history[0].dist_lss = 0.75;
    history[0].row_resid_corrected = 2.0;
    history[0].row_resid_clean = 1.5;
    history[1].k = 2;
    history[1].row_index = 1;
    history[1].row_resid_corrected = 0.125;

    std::stringstream buf;
    write_history_csv(buf, history);
    std::string line;
    std::getline(buf, line);
    CHECK(line == std::string(kHistoryCsvHeader));
    std::getline(buf, line);
    CHECK(line == "1,2,3,0.5,0.25,1,0.75,2,1.5");
    std::getline(buf, line);
    CHECK(line == "2,,1,,,,,0.125,");
}

TEST_CASE("format_double survives strtod round trips") {
    SplitMix64 rng(3);
    for (int t = 0; t < 1000; ++t) {
        double v = (2.0 * rng.next_double() - 1.0) * std::pow(10.0, static_cast<int>(rng.next_u64() % 30) - 15);
        const std::string s = format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
}
