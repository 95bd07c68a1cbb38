// Copyright 2026 The squeezenoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <doctest.h>
#include <json.hpp>

#include "cli/app.hpp"
#include "cli/config.hpp"
#include "cli/csv.hpp"
#include "sqn/errors.hpp"

namespace fs = std::filesystem;
using namespace sqn::cli;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run squeeze(std::initializer_list<std::string> args) {
    std::vector<std::string> owned{"squeeze"};
    owned.insert(owned.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : owned) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Table parse(const std::string& text) {
    std::istringstream in(text);
    return read_csv(in);
}

std::size_t column(const Table& t, const std::string& name) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (t.columns[i] == name) return i;
    }
    FAIL("missing column " << name);
    return 0;
}

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("sqn_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("config parsing") {
    const auto kv = parse_config_text("# comment\nfreq_ghz = 5.0  # trailing\n\n  p=2\n");
    REQUIRE(kv.size() == 2);
    CHECK(kv[0].first == "freq_ghz");
    CHECK(kv[0].second == "5.0");
    CHECK(kv[1].second == "2");
    try {
        parse_config_text("freq_ghz 5\n");
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(e.line() == 1);
    }
    RunConfig c;
    apply_settings(c, {{"freq_ghz", "5"}, {"vac_uv", "10"}, {"freq_ghz", "6"}});
    CHECK(c.drive.measurement_frequency == 6e9);
    CHECK(c.drive.ac_amplitude == doctest::Approx(10e-6));
    CHECK(c.applied.back().first == "freq_ghz");
    CHECK_THROWS_AS(apply_settings(c, {{"bogus", "1"}}), sqn::ValidationError);
    CHECK_THROWS_AS(apply_settings(c, {{"p", "1.5"}}), sqn::ValidationError);
}

TEST_CASE("sweep command") {
    TempDir dir;
    SUBCASE("zero drive gives identical quadrature columns") {
        const auto r = squeeze({"sweep", "--vac-uv", "0", "--set", "sweep_lo=-120", "--set", "sweep_hi=120",
                                "--set", "sweep_points=97"});
        REQUIRE(r.code == 0);
        const Table t = parse(r.out);
        REQUIRE(t.rows.size() == 97);
        const auto a = column(t, "var_A"), b = column(t, "var_B");
        for (const auto& row : t.rows) CHECK(row[a] == row[b]);
        CHECK(t.rows.front()[0] == -120.0);
        CHECK(t.rows[48][0] == 0.0);
    }
    SUBCASE("csv output round-trips byte for byte") {
        const auto file = dir / "fig.csv";
        REQUIRE(squeeze({"sweep", "--vac-uv", "46", "--set", "sweep_lo=-120", "--set", "sweep_hi=120", "--set",
                         "sweep_points=61", "--output", file})
                    .code == 0);
        const std::string original = slurp(file);
        std::istringstream in(original);
        std::ostringstream again;
        write_csv(again, read_csv(in));
        CHECK(again.str() == original);
        CHECK(original.find("# config: vac_uv = 46") != std::string::npos);
    }
    SUBCASE("config file with flag override") {
        const auto cfg = dir / "run.cfg";
        std::ofstream(cfg) << "sweep_units = reduced\nsweep_lo = -2\nsweep_hi = 2\nsweep_points = 5\n"
                              "vac_uv = 99\np = 1\n";
        const auto r = squeeze({"sweep", "--config", cfg, "--vac-uv", "0", "--format", "json"});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["config"]["vac_uv"] == "0");
        CHECK(j["rows"].size() == 5);
        CHECK(j["columns"][3] == "var_A");
    }
    SUBCASE("validation and I/O exit codes") {
        CHECK(squeeze({"sweep"}).code == kInvalidInput);
        CHECK(squeeze({"sweep", "--set", "nonsense=1"}).code == kInvalidInput);
        CHECK(squeeze({"sweep", "--p", "3", "--set", "sweep_lo=0", "--set", "sweep_hi=1"}).code == kInvalidInput);
        const auto bad = squeeze({"sweep", "--set", "sweep_lo=0", "--set", "sweep_hi=1", "--output",
                                  dir / "missing/dir/out.csv"});
        CHECK(bad.code == kIoFailure);
        CHECK_FALSE(bad.err.empty());
        CHECK(squeeze({"sweep", "--config", dir / "nope.cfg"}).code == kIoFailure);
        CHECK(squeeze({"frobnicate"}).code == kInvalidInput);
    }
}

TEST_CASE("optimize command") {
    SUBCASE("four-wave mixing at T = 0") {
        const auto r = squeeze({"optimize", "--temp-mk", "0", "--p", "1", "--set", "u_lo=0", "--set", "u_hi=3",
                                "--set", "z_hi=3"});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(std::abs(j["ratio"].get<double>() - 0.62) <= 0.01);
        CHECK(std::abs(j["db"].get<double>() + 2.09) <= 0.05);
        CHECK(j["converged"] == true);
        CHECK(j["input"]["p"] == 1);
    }
    SUBCASE("three-wave mixing at T = 0") {
        const auto r = squeeze({"optimize", "--temp-mk", "0", "--p", "2", "--set", "u_lo=-1", "--set", "u_hi=1",
                                "--set", "z_hi=3"});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(std::abs(j["ratio"].get<double>() - 0.73) <= 0.01);
        CHECK(std::abs(j["db"].get<double>() + 1.37) <= 0.05);
    }
    SUBCASE("drive pinned to zero") {
        const auto r = squeeze({"optimize", "--temp-mk", "0", "--set", "z_hi=0", "--set", "grid=21"});
        REQUIRE(r.code == 0);
        CHECK(nlohmann::json::parse(r.out)["ratio"] == 1.0);
    }
    SUBCASE("empty bounds") { CHECK(squeeze({"optimize", "--set", "u_lo=2", "--set", "u_hi=1"}).code == kInvalidInput); }
}

TEST_CASE("calibrate command") {
    TempDir dir;
    const auto undriven = dir / "undriven.csv";
    REQUIRE(squeeze({"synth", "--temp-mk", "28", "--set", "gain=1e7", "--set", "amp_noise_k=3", "--set",
                     "synth_points=161", "--output", undriven})
                .code == 0);

    SUBCASE("undriven round trip") {
        const auto r = squeeze({"calibrate", "--input", undriven});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(std::abs(j["gain"].get<double>() / 1e7 - 1.0) < 1e-3);
        CHECK(std::abs(j["amp_noise"].get<double>() / 3.0 - 1.0) < 1e-3);
        CHECK(std::abs(j["temperature"].get<double>() / 0.028 - 1.0) < 1e-3);
        CHECK(j["v_ac"].is_null());
    }
    SUBCASE("driven curve with a prior fit") {
        const auto prior = dir / "prior.json";
        REQUIRE(squeeze({"calibrate", "--input", undriven, "--output", prior}).code == 0);
        const auto driven = dir / "driven.csv";
        REQUIRE(squeeze({"synth", "--temp-mk", "28", "--vac-uv", "46", "--set", "synth_driven=true", "--set",
                         "gain=1e7", "--set", "amp_noise_k=3", "--set", "synth_points=161", "--set",
                         "synth_reach_u=4", "--output", driven})
                    .code == 0);
        const auto r = squeeze({"calibrate", "--prior", prior, "--driven", driven});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(std::abs(j["v_ac"].get<double>() / 46e-6 - 1.0) < 5e-3);
    }
    SUBCASE("too few points") {
        const auto small = dir / "small.csv";
        std::ofstream(small) << "bias_V,measured\n-1e-4,1\n-5e-5,1\n0,1\n5e-5,1\n1e-4,1\n";
        const auto r = squeeze({"calibrate", "--input", small});
        CHECK(r.code == kInvalidInput);
    }
    SUBCASE("malformed csv reports the line") {
        const auto broken = dir / "broken.csv";
        std::ofstream(broken) << "# header\nbias_V,measured\n0,1\n1,abc\n";
        const auto r = squeeze({"calibrate", "--input", broken});
        CHECK(r.code == kInvalidInput);
        CHECK(r.err.find("line 4") != std::string::npos);
    }
    SUBCASE("fit failure") {
        const auto narrow = dir / "narrow.csv";
        REQUIRE(squeeze({"synth", "--set", "synth_reach_u=1.2", "--output", narrow}).code == 0);
        CHECK(squeeze({"calibrate", "--input", narrow}).code == kNumericalFailure);
    }
}

TEST_CASE("reproduce command") {
    TempDir dir;
    SUBCASE("t0 optima") {
        const auto r = squeeze({"reproduce", "t0_optima", "--out-dir", dir.path.string()});
        CHECK(r.code == 0);
        const auto j = nlohmann::json::parse(slurp(dir.path / "t0_optima_summary.json"));
        CHECK(j["all_pass"] == true);
        CHECK(j["checks"][0]["expected_ratio"] == 0.62);
        CHECK(fs::exists(dir.path / "t0_optima.csv"));
    }
    SUBCASE("fig2") {
        const auto r = squeeze({"reproduce", "fig2", "--out-dir", dir.path.string()});
        CHECK(r.code == 0);
        const auto j = nlohmann::json::parse(slurp(dir.path / "fig2_summary.json"));
        CHECK(std::abs(j["checks"][0]["computed_ratio"].get<double>() - 0.74) <= 0.02);
        const Table t = parse(slurp(dir.path / "fig2.csv"));
        CHECK(t.rows.size() == 481);
        CHECK(t.columns.back() == "T_vacuum");
    }
    SUBCASE("fig3 exit status follows its check") {
        const auto r = squeeze({"reproduce", "fig3", "--out-dir", dir.path.string()});
        const auto j = nlohmann::json::parse(slurp(dir.path / "fig3_summary.json"));
        const bool pass = j["all_pass"].get<bool>();
        CHECK(r.code == (pass ? kOk : kNumericalFailure));
        CHECK(j["checks"][0]["expected_ratio"] == 0.82);
    }
    SUBCASE("unknown target") { CHECK(squeeze({"reproduce", "fig9"}).code == kInvalidInput); }
}
