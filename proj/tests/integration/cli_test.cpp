#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "lfss_cli_test";

int run(const std::string& args, const std::string& stdout_file = "") {
    const std::string out = stdout_file.empty() ? "/dev/null" : (kRoot / stdout_file).string();
    const std::string cmd = std::string(LFSS_CLI) + " " + args + " > " + out + " 2> /dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string dir(const std::string& name) {
    const auto d = kRoot / name;
    fs::remove_all(d);
    return d.string();
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("simulate is byte-identical across reruns and worker counts") {
        fs::create_directories(kRoot);
        const std::string base = "simulate --alpha 1.5 --H 0.8,0.9 --method direct --grid 64x64 --seed 7";
        REQUIRE(run(base + " --workers 1 --out " + dir("a")) == 0);
        REQUIRE(run(base + " --workers 1 --out " + dir("b")) == 0);
        REQUIRE(run("--workers 3 " + base + " --out " + dir("c")) == 0);
        const auto a = slurp(kRoot / "a" / "field.csv");
        CHECK(a.size() > 64 * 64 * 10);
        CHECK(a == slurp(kRoot / "b" / "field.csv"));
        CHECK(a == slurp(kRoot / "c" / "field.csv"));
        CHECK(slurp(kRoot / "a" / "field.json") == slurp(kRoot / "c" / "field.json"));
        const auto side = nlohmann::json::parse(slurp(kRoot / "a" / "field.json"));
        CHECK(side["schema"] == 1);
        CHECK(side["provenance"]["seed"] == 7);
    }

    TEST_CASE("wavelet methods are deterministic") {
        fs::create_directories(kRoot);
        const std::string base = "simulate --alpha 1.5 --H 0.8,0.9 --method wavelet-iid --n 3 --grid 17 --lo -1";
        REQUIRE(run(base + " --workers 1 --out " + dir("i1")) == 0);
        REQUIRE(run(base + " --workers 2 --out " + dir("i2")) == 0);
        CHECK(slurp(kRoot / "i1" / "field.csv") == slurp(kRoot / "i2" / "field.csv"));
        const std::string exact = "simulate --alpha 1.5 --H 0.8,0.9 --method wavelet-exact --n 2 --grid 9 --lo -1";
        REQUIRE(run(exact + " --workers 1 --out " + dir("e1")) == 0);
        REQUIRE(run(exact + " --workers 2 --out " + dir("e2")) == 0);
        CHECK(slurp(kRoot / "e1" / "field.csv") == slurp(kRoot / "e2" / "field.csv"));
    }

    TEST_CASE("config files and flag precedence") {
        fs::create_directories(kRoot);
        {
            std::ofstream cfg(kRoot / "run.cfg");
            cfg << "alpha = 1.5\nH = 0.8\ngrid = 32\nseed = 3\n";
        }
        REQUIRE(run("simulate --config " + (kRoot / "run.cfg").string() + " --out " + dir("cfg1")) == 0);
        REQUIRE(run("simulate --alpha 1.5 --H 0.8 --grid 32 --seed 3 --out " + dir("cfg2")) == 0);
        CHECK(slurp(kRoot / "cfg1" / "field.csv") == slurp(kRoot / "cfg2" / "field.csv"));
        REQUIRE(run("simulate --config " + (kRoot / "run.cfg").string() + " --seed 4 --out " + dir("cfg3")) == 0);
        CHECK(slurp(kRoot / "cfg1" / "field.csv") != slurp(kRoot / "cfg3" / "field.csv"));
    }

    TEST_CASE("dims examples") {
        fs::create_directories(kRoot);
        REQUIRE(run("dims --alpha 1.5 --H 0.6,0.8 --d 1", "d1.json") == 0);
        const auto d1 = nlohmann::json::parse(slurp(kRoot / "d1.json"));
        CHECK(d1["range"].get<double>() == doctest::Approx(1.0));
        CHECK(d1["graph"].get<double>() == doctest::Approx(2.4));
        REQUIRE(run("dims --alpha 1.5 --H 0.6,0.8 --d 3", "d3.json") == 0);
        const auto d3 = nlohmann::json::parse(slurp(kRoot / "d3.json"));
        CHECK(d3["range"].get<double>() == doctest::Approx(2.9167).epsilon(1e-4));
        CHECK(d3["graph"].get<double>() == doctest::Approx(2.9167).epsilon(1e-4));
        CHECK(run("dims --alpha 1.5 --H 0.8,0.6 --d 1") == 2);
    }

    TEST_CASE("exit codes") {
        fs::create_directories(kRoot);
        CHECK(run("--help") == 0);
        CHECK(run("") == 2);
        CHECK(run("simulate --alpha 1.5") == 2);
        CHECK(run("simulate --alpha 1.5 --H 0.6 --out " + dir("regime")) == 2);
        CHECK(run("simulate --alpha 1.5 --H 0.8 --method wavelet-exact --n 4 --spacing 0.0625 --out " + dir("res")) == 2);
        CHECK(run("verify --suite nonsense") == 2);
        CHECK(run("analyze --input " + (kRoot / "does_not_exist.csv").string()) == 4);
        {
            std::ofstream f(kRoot / "blocker");
            f << "x";
        }
        CHECK(run("simulate --alpha 1.5 --H 0.8 --grid 8 --out " + (kRoot / "blocker" / "sub").string()) == 4);
    }

    TEST_CASE("wavelet dump and rng check") {
        fs::create_directories(kRoot);
        const auto csv = (kRoot / "psi.csv").string();
        REQUIRE(run("wavelet dump --order 4 --level 8 --out " + csv) == 0);
        const auto text = slurp(csv);
        CHECK(text.rfind("x,value\n", 0) == 0);
        REQUIRE(run("wavelet dump --kind derivative --H 0.8 --alpha 1.5 --out " + csv) == 0);
        CHECK(run("wavelet dump --kind sideways --out " + csv) == 2);
        REQUIRE(run("rng-check --alpha 1.5 --count 100000 --seed 2", "rng.json") == 0);
        const auto j = nlohmann::json::parse(slurp(kRoot / "rng.json"));
        CHECK(j["tail_slope"].get<double>() == doctest::Approx(-1.5).epsilon(0.1));
    }

    TEST_CASE("analyze reads the sidecar") {
        fs::create_directories(kRoot);
        REQUIRE(run("simulate --alpha 1.5 --H 0.8 --grid 16384 --seed 2 --out " + dir("path")) == 0);
        REQUIRE(run("analyze --input " + (kRoot / "path" / "field.csv").string(), "an.json") == 0);
        const auto j = nlohmann::json::parse(slurp(kRoot / "an.json"));
        CHECK(j["schema"] == 1);
        CHECK(j["checks"][0]["theory"].get<double>() == doctest::Approx(0.8 - 1.0 / 1.5));
        CHECK(std::isfinite(j["checks"][0]["estimate"].get<double>()));
    }

    TEST_CASE("verify writes a report and sets the exit code") {
        fs::create_directories(kRoot);
        const auto report = (kRoot / "wavelet.json").string();
        CHECK(run("verify --suite wavelet --out " + report) == 0);
        const auto j = nlohmann::json::parse(slurp(report));
        CHECK(j["pass"] == true);
        CHECK(j["checks"].size() >= 5u);
    }
}
