// Copyright 2026 The fairsamp Authors
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


#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <catch2/catch.hpp>

#include "fairsamp/json_io.hpp"

namespace {

namespace fs = std::filesystem;
using fairsamp::Json;

struct Run {
    int code = -1;
    std::string out;
};

std::string data(const std::string &rel) {
    return std::string(FAIRSAMP_DATA_DIR) + "/" + rel;
}

Run run(const std::string &args) {
    const std::string cmd = std::string("\"") + FAIRSAMP_CLI + "\" " + args + " 2>/dev/null";
    Run r;
    FILE *pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        r.out.append(buf.data(), n);
    }
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

Json run_json(const std::string &args, int expected_code = 0) {
    const Run r = run(args);
    INFO(args);
    INFO(r.out);
    REQUIRE(r.code == expected_code);
    return Json::parse(r.out);
}

fs::path scratch_dir(const std::string &name) {
    const fs::path p = fs::temp_directory_path() / ("fairsamp_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

Json read_json(const fs::path &p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return Json::parse(ss.str());
}

} // namespace

TEST_CASE("exit codes follow the verdict and input validity", "[cli]") {
    CHECK(run("check " + data("devices/makarov_traced.json")).code == 0);
    CHECK(run("check " + data("devices/makarov_adversary.json")).code == 2);
    CHECK(run("check " + data("invalid/malformed.json")).code == 1);
    CHECK(run("check " + data("devices/does_not_exist.json")).code == 1);
    CHECK(run("demo bogus").code == 1);
    CHECK(run("check " + data("devices/makarov_traced.json") + " --tol -1").code == 1);
    CHECK(run("").code == 1);
    CHECK(run("--help").code == 0);
}

TEST_CASE("incomplete POVM reports setting, outcome and residual", "[cli]") {
    const Json err = run_json("check " + data("invalid/noncomplete.json"), 1);
    CHECK(err.contains("error"));
    CHECK(err.at("setting") == "0");
    CHECK(err.at("outcome") == "noclick");
    CHECK(err.at("residual").get<double>() == Approx(0.1).margin(1e-12));
}

TEST_CASE("check reports weak fair sampling of the traced device", "[cli]") {
    const Json r = run_json("check " + data("devices/makarov_traced.json"));
    CHECK(r.at("weak").get<bool>());
    CHECK(r.at("strong").get<bool>());
    CHECK(r.at("epsilon").get<double>() == Approx(0.0).margin(1e-12));
    for (const auto &[s, e] : r.at("classical_eff").items()) {
        INFO(s);
        CHECK(e.get<double>() == Approx(0.25).margin(1e-12));
    }
}

TEST_CASE("analyser epsilon with a supplied filter element", "[cli]") {
    const Json r = run_json("check " + data("devices/analyser_unequal.json") + " --mq " +
                            data("mq/analyser_nmax4.json"), 2);
    CHECK_FALSE(r.at("weak").get<bool>());
    CHECK(r.at("mq_source") == "file");
    CHECK(r.at("epsilon").get<double>() == Approx(0.0125).margin(1e-9));
    const double eps = r.at("epsilon").get<double>();
    CHECK(r.at("tv_bound").get<double>() == Approx(eps / (1.0 - eps)).margin(1e-12));
}

TEST_CASE("decompose writes the three artefacts", "[cli]") {
    for (const std::string dev : {"makarov_traced", "single_photon_analyser", "exact_fs",
                                  "rank_deficient"}) {
        INFO(dev);
        const fs::path out = scratch_dir("decompose_" + dev);
        const Run r = run("decompose " + data("devices/" + dev + ".json") + " -o " +
                          out.string() + " --trials 20 --seed 3");
        REQUIRE(r.code == 0);
        CHECK(fs::exists(out / "filter.json"));
        CHECK(fs::exists(out / "lossless.json"));
        const Json report = read_json(out / "report.json");
        CHECK(report.at("max_deviation").get<double>() <= 1e-9);
        CHECK(report.at("kraus_completeness_residual").get<double>() <= 1e-9);
        CHECK(report.at("trials").get<int>() == 20);
        fs::remove_all(out);
    }
}

TEST_CASE("post-selection leaves lossless statistics unchanged", "[cli]") {
    const Json raw = run_json("simulate " + data("scenarios/lossless.json"));
    const Json post = run_json("simulate " + data("scenarios/lossless.json") + " --postselect");
    REQUIRE(post.contains("postselected"));
    for (const auto &[setting, dist] : post.at("postselected").items()) {
        INFO(setting);
        CHECK(raw.at("acceptance").at(setting).get<double>() == Approx(1.0).margin(1e-12));
        for (const auto &[outcome, p] : dist.items()) {
            INFO(outcome);
            CHECK(p.get<double>() ==
                  Approx(raw.at("raw").at(setting).at(outcome).get<double>()).margin(1e-12));
        }
    }
}

TEST_CASE("settings that never pass the filter are listed as erased", "[cli]") {
    const Json r = run_json("simulate " + data("scenarios/erased_setting.json"));
    REQUIRE(r.at("erased").size() == 1);
    CHECK(r.at("erased")[0] == "off,z");
    CHECK(r.at("acceptance").at("off,z").get<double>() == Approx(0.0).margin(1e-12));
}

TEST_CASE("singlet with flat devices reaches Tsirelson after post-selection", "[cli]") {
    const Json r = run_json("simulate " + data("scenarios/chsh_singlet.json") + " --postselect");
    CHECK(r.at("bell").at("postselected").get<double>() ==
          Approx(2.0 * std::sqrt(2.0)).margin(1e-9));
    CHECK(r.at("bell").at("beta_max").get<double>() == Approx(4.0).margin(1e-12));
    CHECK(r.at("ideal_experiment").at("max_deviation").get<double>() <= 1e-9);
    for (const auto &[s, a] : r.at("acceptance").items()) {
        INFO(s);
        CHECK(a.get<double>() == Approx(0.0625).margin(1e-12));
    }
}

TEST_CASE("bound vanishes on exact fair sampling and holds on analysers", "[cli]") {
    const Json exact = run_json("bound " + data("scenarios/exact_fs.json"));
    CHECK(exact.at("epsilon_total").get<double>() <= 1e-9);
    CHECK(exact.at("bell").at("bound").get<double>() <= 1e-8);
    CHECK(exact.at("bell").at("measured_deviation").get<double>() <= 1e-9);

    const Json r = run_json("bound " + data("scenarios/two_analysers.json"));
    const double eps = r.at("epsilon_total").get<double>();
    CHECK(eps == Approx(1.0 - 0.9875 * 0.9875).margin(1e-12));
    CHECK(r.at("epsilon_joint").get<double>() <= eps + 1e-12);
    const Json &bell = r.at("bell");
    CHECK(bell.at("bound").get<double>() ==
          Approx(2.0 * eps * bell.at("beta_max").get<double>()).margin(1e-12));
    CHECK(bell.at("measured_deviation").get<double>() <= bell.at("bound").get<double>());
    CHECK(r.at("measured_tv").get<double>() <= r.at("tv_bound").get<double>());
    for (const auto &p : r.at("parties")) {
        CHECK(p.at("measured_tv").get<double>() <= p.at("tv_bound").get<double>());
    }
}

TEST_CASE("makarov demo", "[cli]") {
    const Json r = run_json("demo makarov");
    for (const char *key : {"traced_verdict", "adversary_verdict", "chsh", "detection_rate",
                            "correlators"}) {
        INFO(key);
        CHECK(r.contains(key));
    }
    CHECK(r.at("traced_verdict").at("weak").get<bool>());
    CHECK_FALSE(r.at("adversary_verdict").at("weak").get<bool>());
    CHECK(r.at("chsh").get<double>() == Approx(4.0).margin(1e-12));

    const Json noisy = run_json("demo makarov --noise 0.4");
    CHECK(noisy.at("chsh").get<double>() == Approx(3.0).margin(1e-12));
    CHECK(noisy.at("detection_rate").get<double>() == Approx(0.1).margin(1e-12));
}

TEST_CASE("demo output is reproducible for a fixed seed", "[cli]") {
    for (const std::string args : {"demo makarov --seed 7", "demo prop2-random --count 5 --seed 7",
                                   "demo analyser", "demo chsh-singlet"}) {
        INFO(args);
        const Run a = run(args);
        const Run b = run(args);
        REQUIRE(a.code == 0);
        CHECK(a.out == b.out);
    }
    CHECK(run("demo prop2-random --count 5 --seed 7").out !=
          run("demo prop2-random --count 5 --seed 8").out);
}

TEST_CASE("output file is written in place of stdout", "[cli]") {
    const fs::path dir = scratch_dir("output");
    const fs::path file = dir / "check.json";
    const Run r = run("check " + data("devices/makarov_traced.json") + " -o " + file.string());
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    const Json j = read_json(file);
    CHECK(j.at("weak").get<bool>());
    fs::remove_all(dir);
}
