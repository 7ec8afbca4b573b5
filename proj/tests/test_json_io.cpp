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


#include <catch2/catch.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "fairsamp/adversary.hpp"
#include "fairsamp/json_io.hpp"
#include "fairsamp/optics.hpp"
#include "fairsamp/random.hpp"

using namespace fairsamp;
namespace fs = std::filesystem;

namespace {

const fs::path kData = FAIRSAMP_DATA_DIR;

fs::path scratch(const std::string &name) {
    const fs::path dir = fs::temp_directory_path() / "fairsamp_json_test";
    fs::create_directories(dir);
    return dir / name;
}

void same_device(const LossyDevice &a, const LossyDevice &b, double tol) {
    REQUIRE(a.dim() == b.dim());
    REQUIRE(a.settings() == b.settings());
    REQUIRE(a.outcomes() == b.outcomes());
    for (std::size_t x = 0; x < a.settings().size(); ++x) {
        for (std::size_t o = 0; o <= a.outcomes().size(); ++o) {
            CHECK(max_abs_diff(a.element(x, o), b.element(x, o)) <= tol);
        }
    }
}

} // namespace

TEST_CASE("matrices round-trip exactly", "[json]") {
    Rng rng(101);
    for (std::size_t d = 1; d <= 5; ++d) {
        const Matrix m = ginibre(d, d, rng);
        CHECK((matrix_from_json(matrix_to_json(m)) - m).cwiseAbs().maxCoeff() == 0.0);
    }
    const Json j = matrix_to_json(Matrix::Identity(2, 2));
    CHECK(j[0][0] == Json::array({1.0, 0.0}));
}

TEST_CASE("matrix parsing accepts real entries and rejects bad shapes", "[json]") {
    const Matrix m = matrix_from_json(Json::parse("[[1, 0.5], [[0.5, 0], 2]]"));
    CHECK(m(0, 1) == Complex(0.5, 0.0));
    CHECK(m(1, 1) == Complex(2.0, 0.0));
    CHECK_THROWS_AS(matrix_from_json(Json::parse("[[1, 0], [0]]")), Error);
    CHECK_THROWS_AS(matrix_from_json(Json::parse("[]")), Error);
    CHECK_THROWS_AS(matrix_from_json(Json::parse("[[\"a\"]]")), Error);
    CHECK_THROWS_AS(matrix_from_json(Json::parse("[[[1, 2, 3]]]")), Error);
    CHECK_THROWS_AS(operator_from_json(Json::parse("[[0, 1], [0, 0]]")), NotHermitianError);
}

TEST_CASE("devices round-trip through JSON", "[json]") {
    for (const auto &dev : {makarov_traced(), makarov_adversary_device(),
                            analyser_device(analyser_spec(0.7, 0.1, {0.0, 0.9}, 3))}) {
        same_device(device_from_json(device_to_json(dev)), dev, 0.0);
    }
    for (const auto &e : fs::directory_iterator(kData / "devices")) {
        INFO(e.path());
        const LossyDevice dev = load_device(e.path());
        const Json once = device_to_json(dev);
        same_device(device_from_json(once), dev, 1e-15);
        CHECK(device_to_json(device_from_json(once)) == once);
    }
}

TEST_CASE("device parsing errors", "[json]") {
    Json j = device_to_json(makarov_traced());
    Json missing = j;
    missing.erase("outcomes");
    CHECK_THROWS_AS(device_from_json(missing), Error);
    Json bad_dim = j;
    bad_dim["dim"] = -2;
    CHECK_THROWS_AS(device_from_json(bad_dim), Error);
    Json reserved = j;
    reserved["outcomes"] = Json::array({"+", "noclick"});
    CHECK_THROWS_AS(device_from_json(reserved), Error);
    Json wrong_size = j;
    wrong_size["povm"]["0"]["+"] = Json::parse("[[1]]");
    CHECK_THROWS_AS(device_from_json(wrong_size), PovmError);
    try {
        (void)load_device(kData / "invalid" / "noncomplete.json");
        FAIL("incomplete device accepted");
    } catch (const PovmError &e) {
        CHECK(e.setting() == "0");
        CHECK(e.residual() == Approx(0.1));
    }
    CHECK_THROWS_AS(read_json_file(kData / "invalid" / "malformed.json"), Error);
    CHECK_THROWS_AS(read_json_file(kData / "invalid" / "absent.json"), Error);
}

TEST_CASE("states parse from kets or density matrices", "[json]") {
    // Arrays of [re, im] pairs are kets: this one is (0.6, 0.8i).
    const DensityState pure = state_from_json(Json::parse("[[0.6, 0], [0, 0.8]]"));
    CHECK(pure.dim() == 2);
    CHECK(pure.op()(0, 1).imag() == Approx(-0.48));
    const DensityState kv = state_from_json(Json::parse("[[3, 0], [4, 0]]"));
    CHECK(kv.op()(0, 0).real() == Approx(0.36));
    CHECK(kv.op()(1, 1).real() == Approx(0.64));
    const DensityState rho = state_from_json(Json::parse("[[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]"));
    CHECK(rho.op()(0, 0).real() == Approx(0.5));
    CHECK_THROWS_AS(state_from_json(Json::parse("[[0, 0], [0, 0]]")), Error);
    CHECK_THROWS_AS(state_from_json(Json::parse("[[[2, 0], [0, 0]], [[0, 0], [0, 0]]]")), Error);
}

TEST_CASE("scenario files resolve device paths and extensions", "[json]") {
    const ScenarioFile sf = load_scenario(kData / "scenarios" / "exact_fs.json");
    CHECK(sf.scenario.parties().size() == 2);
    CHECK(sf.scenario.bell().has_value());
    CHECK_FALSE(sf.mqs[0].has_value());

    const ScenarioFile two = load_scenario(kData / "scenarios" / "two_analysers.json");
    REQUIRE(two.mqs[1].has_value());
    CHECK(max_abs_diff(*two.mqs[1], HermitianOperator::identity(2)) == 0.0);

    const ScenarioFile imp = load_scenario(kData / "scenarios" / "imperfect_state.json");
    CHECK(imp.good_dims[0] == std::optional<std::size_t>(2));

    Json j = read_json_file(kData / "scenarios" / "chsh_singlet.json");
    j["parties"][0]["dim"] = 3;
    CHECK_THROWS_AS(scenario_from_json(j, kData / "scenarios"), DimensionError);
    j = read_json_file(kData / "scenarios" / "chsh_singlet.json");
    j["bell"]["coeffs"][0]["c"] = "one";
    CHECK_THROWS_AS(scenario_from_json(j, kData / "scenarios"), Error);
    j = read_json_file(kData / "scenarios" / "chsh_singlet.json");
    j["parties"] = Json::array();
    CHECK_THROWS_AS(scenario_from_json(j, kData / "scenarios"), Error);
}

TEST_CASE("report helpers round to fifteen digits", "[json]") {
    CHECK(round15(0.1 + 0.2) == 0.3);
    CHECK(round15(1.0 / 3.0) == 0.333333333333333);
    CHECK(round15(0.0) == 0.0);
    const Json d = distribution_to_json(OutcomeDistribution{{"a", "b"}, {1.0 / 3.0, 2.0 / 3.0}});
    CHECK(d["a"].get<double>() == 0.333333333333333);
    const std::string text = dump(Json{{"b", 1}, {"a", 2}});
    CHECK(text.find("\"a\"") < text.find("\"b\""));
    CHECK(text.back() == '\n');
}

TEST_CASE("atomic writes leave only the target", "[json]") {
    const fs::path p = scratch("out.json");
    fs::remove(p);
    write_file_atomic(p, "{}\n");
    std::ifstream in(p);
    std::string s;
    std::getline(in, s);
    CHECK(s == "{}");
    std::size_t files = 0;
    for (const auto &e : fs::directory_iterator(p.parent_path())) {
        (void)e;
        ++files;
    }
    CHECK(files == 1);
    CHECK_THROWS_AS(write_file_atomic(scratch("missing/dir/out.json"), "{}"), Error);
}
