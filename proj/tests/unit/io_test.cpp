#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "lfss/errors.hpp"
#include "lfss/io.hpp"

using namespace lfss;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "lfss_io_test";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_SUITE("io") {
    TEST_CASE("field csv round trip is exact") {
        FieldSample f;
        f.points = {{0.0, 0.1}, {1.0 / 3.0, 0.1}, {2.0 / 3.0, -1e-300}};
        f.values = {{0.0, std::nextafter(1.0, 2.0), -123456.789e-10}, {1.0, 2.0, 3.0}};
        const auto path = scratch("field.csv");
        write_field_csv(path, f);
        std::ifstream in(path);
        std::string header;
        std::getline(in, header);
        CHECK(header == "t_1,t_2,x_1,x_2");
        const auto g = read_field_csv(path);
        CHECK(g.points == f.points);
        CHECK(g.values == f.values);
    }

    TEST_CASE("malformed csv") {
        const auto path = scratch("bad.csv");
        {
            std::ofstream out(path);
            out << "t_1,x_1\n0.5,1,2\n";
        }
        CHECK_THROWS_AS(read_field_csv(path), Error);
        {
            std::ofstream out(path);
            out << "t_1,x_1\n0.5,abc\n";
        }
        CHECK_THROWS_AS(read_field_csv(path), Error);
        try {
            read_field_csv(scratch("missing.csv"));
            FAIL("missing file accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Io);
        }
    }

    TEST_CASE("sidecar carries the schema and provenance") {
        Provenance p;
        p.method = Method::WaveletExact;
        p.seed = 7;
        p.streams = {11, 12};
        p.alpha = 1.5;
        p.H = {0.8, 0.9};
        p.truncation = TruncationSpec{3, 1.0};
        const auto j = sidecar_json(p, {{"command", "simulate"}});
        CHECK(j["schema"] == 1);
        CHECK(j["command"] == "simulate");
        CHECK(j["provenance"]["method"] == "wavelet-exact");
        CHECK(j["provenance"]["truncation"]["n"] == 3);
        CHECK(j["provenance"]["streams"][1] == 12);
        const auto path = scratch("side.json");
        write_json(path, j);
        CHECK(read_json(path) == j);
    }

    TEST_CASE("reports use null for missing estimates") {
        auto c = make_check("x", std::nan(""), 1.0, 0.1);
        const auto j = checks_json({c, make_check("y", 1.0, 1.0, 0.1)});
        CHECK(j["checks"][0]["estimate"].is_null());
        CHECK(j["pass"] == false);
    }

    TEST_CASE("config files") {
        const auto path = scratch("run.cfg");
        {
            std::ofstream out(path);
            out << "# model\nalpha = 1.5\nH = 0.8, 0.9   # ordered\n\nseed=3\nseed = 4\n";
        }
        const auto cfg = read_config(path);
        CHECK(cfg.at("alpha") == "1.5");
        CHECK(cfg.at("H") == "0.8, 0.9");
        CHECK(cfg.at("seed") == "4");
        {
            std::ofstream out(path);
            out << "alpha 1.5\n";
        }
        CHECK_THROWS_AS(read_config(path), Error);
    }

    TEST_CASE("lists and shapes") {
        CHECK(parse_real_list("0.8,0.9") == std::vector<double>{0.8, 0.9});
        CHECK(parse_real_list(" 1e-3 ") == std::vector<double>{1e-3});
        CHECK_THROWS_AS(parse_real_list("0.8,,0.9"), Error);
        CHECK(parse_shape("64x32") == std::vector<std::size_t>{64, 32});
        CHECK_THROWS_AS(parse_shape("64x0"), Error);
        CHECK_THROWS_AS(parse_shape("6.5"), Error);
    }
}
