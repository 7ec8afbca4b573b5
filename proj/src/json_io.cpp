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

#include "fairsamp/json_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fairsamp {

double round15(double v) {
    if (!std::isfinite(v)) {
        return v;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    double r = std::strtod(buf, nullptr);
    return r == 0.0 ? 0.0 : r; // no negative zero in output
}

Json matrix_to_json(const Matrix &m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            const Complex z = m(i, k);
            row.push_back(Json::array({z.real(), z.imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

Complex entry_from_json(const Json &e) {
    if (e.is_number()) {
        return {e.get<double>(), 0.0};
    }
    if (e.is_array() && e.size() == 2 && e[0].is_number() &&
        e[1].is_number()) {
        return {e[0].get<double>(), e[1].get<double>()};
    }
    throw Error("matrix entry must be a number or a [re, im] pair");
}

const Json &field(const Json &j, const char *key) {
    if (!j.is_object() || !j.contains(key)) {
        throw Error(std::string("missing field '") + key + "'");
    }
    return j.at(key);
}

std::vector<std::string> labels_from_json(const Json &j, const char *what) {
    if (!j.is_array()) {
        throw Error(std::string(what) + " must be an array of strings");
    }
    std::vector<std::string> out;
    for (const auto &e : j) {
        if (!e.is_string()) {
            throw Error(std::string(what) + " must be an array of strings");
        }
        out.push_back(e.get<std::string>());
    }
    return out;
}

} // namespace

Matrix matrix_from_json(const Json &j) {
    if (!j.is_array() || j.empty()) {
        throw Error("matrix must be a nonempty array of rows");
    }
    const std::size_t n = j.size();
    check_dimension(n);
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (!j[i].is_array() || j[i].size() != n) {
            throw Error("matrix must be square");
        }
        for (std::size_t k = 0; k < n; ++k) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                entry_from_json(j[i][k]);
        }
    }
    return m;
}

HermitianOperator operator_from_json(const Json &j) {
    return HermitianOperator(matrix_from_json(j));
}

Vector vector_from_json(const Json &j) {
    if (!j.is_array() || j.empty()) {
        throw Error("vector must be a nonempty array");
    }
    check_dimension(j.size());
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = entry_from_json(j[i]);
    }
    return v;
}

Json device_to_json(const LossyDevice &dev) {
    Json povm = Json::object();
    for (std::size_t x = 0; x < dev.settings().size(); ++x) {
        Json row = Json::object();
        for (std::size_t a = 0; a < dev.outcomes().size(); ++a) {
            row[dev.outcomes()[a]] = matrix_to_json(dev.element(x, a).matrix());
        }
        row[kNoClick] = matrix_to_json(dev.noclick(x).matrix());
        povm[dev.settings()[x]] = std::move(row);
    }
    return Json{{"dim", dev.dim()},
                {"settings", dev.settings()},
                {"outcomes", dev.outcomes()},
                {"povm", std::move(povm)}};
}

LossyDevice device_from_json(const Json &j) {
    const Json &dim = field(j, "dim");
    if (!dim.is_number_unsigned() || dim.get<std::size_t>() == 0) {
        throw Error("'dim' must be a positive integer");
    }
    const auto settings = labels_from_json(field(j, "settings"), "settings");
    const auto outcomes = labels_from_json(field(j, "outcomes"), "outcomes");
    const Json &povm = field(j, "povm");
    if (!povm.is_object()) {
        throw Error("'povm' must be an object");
    }
    PovmTable t;
    for (const auto &[x, row] : povm.items()) {
        if (!row.is_object()) {
            throw Error("POVM of setting '" + x + "' must be an object");
        }
        for (const auto &[a, m] : row.items()) {
            try {
                t[x].emplace(a, operator_from_json(m));
            } catch (const PovmError &) {
                throw;
            } catch (const Error &e) {
                throw PovmError("element ('" + x + "', '" + a +
                                    "'): " + e.what(),
                                x, a, 0.0);
            }
        }
    }
    return LossyDevice(dim.get<std::size_t>(), settings, outcomes, t);
}

DensityState state_from_json(const Json &j) {
    if (j.is_array() && !j.empty() && j[0].is_array() && !j[0].empty() &&
        j[0][0].is_array()) {
        return DensityState(operator_from_json(j));
    }
    const Vector v = vector_from_json(j);
    if (v.norm() == 0.0) {
        throw Error("state vector is zero");
    }
    return DensityState::pure(v);
}

Json distribution_to_json(const OutcomeDistribution &d) {
    Json o = Json::object();
    for (std::size_t i = 0; i < d.labels.size(); ++i) {
        o[d.labels[i]] = round15(d.probs[i]);
    }
    return o;
}

Json joint_to_json(const JointDistribution &d) {
    Json o = Json::object();
    for (std::size_t i = 0; i < d.outcomes.size(); ++i) {
        o[join_label(d.outcomes[i])] = round15(d.probs[i]);
    }
    return o;
}

Json verdict_to_json(const FairSamplingVerdict &v) {
    Json eff = Json::object();
    for (const auto &[x, e] : v.classical_eff) {
        eff[x] = round15(e);
    }
    return Json{{"weak", v.weak},
                {"strong", v.strong},
                {"homogeneous", v.homogeneous},
                {"epsilon", round15(v.epsilon)},
                {"classical_eff", std::move(eff)},
                {"mq", matrix_to_json(v.quantum_elem.matrix())},
                {"support", matrix_to_json(v.support.matrix())}};
}

Json filter_to_json(const Decomposition &d) {
    Json per = Json::object();
    for (std::size_t x = 0; x < d.settings.size(); ++x) {
        const QuantumFilter &f = d.per_setting[x].filter;
        per[d.settings[x]] = Json{
            {"click", matrix_to_json(f.kraus_click.matrix())},
            {"noclick", matrix_to_json(f.kraus_noclick.matrix())}};
    }
    return Json{{"settings", d.settings}, {"kraus", std::move(per)}};
}

Json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open '" + path.string() + "'");
    }
    try {
        return Json::parse(in);
    } catch (const Json::exception &e) {
        throw Error("malformed JSON in '" + path.string() + "': " + e.what());
    }
}

LossyDevice load_device(const std::filesystem::path &path) {
    return device_from_json(read_json_file(path));
}

ScenarioFile scenario_from_json(const Json &j,
                                const std::filesystem::path &base) {
    const Json &parties = field(j, "parties");
    if (!parties.is_array() || parties.empty()) {
        throw Error("'parties' must be a nonempty array");
    }
    std::vector<LossyDevice> devices;
    std::vector<std::optional<HermitianOperator>> mqs;
    std::vector<std::optional<std::size_t>> good_dims;
    for (const auto &p : parties) {
        const Json &d = field(p, "device");
        LossyDevice dev = d.is_string()
                              ? load_device(base / d.get<std::string>())
                              : device_from_json(d);
        if (p.contains("dim") &&
            (!p["dim"].is_number_unsigned() ||
             p["dim"].get<std::size_t>() != dev.dim())) {
            throw DimensionError("party 'dim' does not match its device");
        }
        mqs.push_back(p.contains("mq")
                          ? std::optional(operator_from_json(p["mq"]))
                          : std::nullopt);
        if (p.contains("good_dim")) {
            if (!p["good_dim"].is_number_unsigned()) {
                throw Error("'good_dim' must be a positive integer");
            }
            good_dims.emplace_back(p["good_dim"].get<std::size_t>());
        } else {
            good_dims.emplace_back(std::nullopt);
        }
        devices.push_back(std::move(dev));
    }
    std::optional<std::vector<BellFunctional::Entry>> coeffs;
    if (j.contains("bell")) {
        const Json &list = field(j["bell"], "coeffs");
        if (!list.is_array()) {
            throw Error("'bell.coeffs' must be an array");
        }
        coeffs.emplace();
        for (const auto &e : list) {
            const Json &c = field(e, "c");
            if (!c.is_number()) {
                throw Error("Bell coefficient 'c' must be a number");
            }
            coeffs->push_back({labels_from_json(field(e, "x"), "x"),
                               labels_from_json(field(e, "a"), "a"),
                               c.get<double>()});
        }
    }
    return ScenarioFile{
        BellScenario(std::move(devices), state_from_json(field(j, "state")),
                     std::move(coeffs)),
        std::move(mqs), std::move(good_dims)};
}

ScenarioFile load_scenario(const std::filesystem::path &path) {
    return scenario_from_json(read_json_file(path), path.parent_path());
}

std::string dump(const Json &j) { return j.dump(2) + "\n"; }

void write_file_atomic(const std::filesystem::path &path,
                       const std::string &content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot write '" + tmp.string() + "'");
        }
        out << content;
        out.flush();
        if (!out) {
            throw Error("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("cannot move output into '" + path.string() +
                    "': " + ec.message());
    }
}

} // namespace fairsamp
