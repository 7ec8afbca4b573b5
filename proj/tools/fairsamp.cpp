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

// fairsamp: fair-sampling analysis of lossy measurement devices.
//
//   fairsamp check device.json [--mq mq.json] [--tol 1e-8]
//   fairsamp decompose device.json -o outdir [--trials 100] [--seed 1]
//   fairsamp simulate scenario.json [--postselect] [--seed 1]
//   fairsamp bound scenario.json
//   fairsamp demo makarov|analyser|chsh-singlet|prop2-random [options]
//
// Exit codes: 0 success (check: weak fair sampling holds), 2 check found no
// fair sampling, 1 input error.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "fairsamp/commands.hpp"

int main(int argc, char **argv) {
    using namespace fairsamp;

    CLI::App app{"Fair-sampling analysis of lossy measurement devices"};
    app.require_subcommand(1);

    double tol = kDecisionTol;
    std::uint64_t seed = 1;
    std::string output;
    std::string input;
    std::string mq_path;
    std::size_t trials = 100;
    bool postselect = false;
    std::string demo_name;
    DemoOptions demo;
    double eta1 = 0.0, eta2 = 0.0, delta = 0.0;

    auto add_common = [&](CLI::App *sub, bool with_seed) {
        sub->add_option("--tol", tol, "Decision tolerance")
            ->check(CLI::PositiveNumber);
        if (with_seed) {
            sub->add_option("--seed", seed, "Random seed");
        }
        sub->add_option("-o,--output", output, "Output path");
    };

    auto *check = app.add_subcommand("check", "Fair-sampling verdict of a device");
    check->add_option("device", input, "Device JSON")->required();
    check->add_option("--mq", mq_path, "Quantum filter element for epsilon");
    add_common(check, false);

    auto *decompose =
        app.add_subcommand("decompose", "Filter and lossless decomposition");
    decompose->add_option("device", input, "Device JSON")->required();
    decompose->add_option("--trials", trials, "Verification states");
    add_common(decompose, true);
    decompose->get_option("--output")->required();

    auto *simulate = app.add_subcommand("simulate", "Joint statistics of a scenario");
    simulate->add_option("scenario", input, "Scenario JSON")->required();
    simulate->add_flag("--postselect", postselect, "Report post-selected statistics");
    add_common(simulate, true);

    auto *bound = app.add_subcommand("bound", "Bounds and measured deviations");
    bound->add_option("scenario", input, "Scenario JSON")->required();
    add_common(bound, false);

    auto *demo_cmd = app.add_subcommand("demo", "Built-in demonstrations");
    demo_cmd->add_option("name", demo_name, "makarov, analyser, chsh-singlet or prop2-random")
        ->required()
        ->check(CLI::IsMember({"makarov", "analyser", "chsh-singlet", "prop2-random"}));
    demo_cmd->add_option("--nmax", demo.n_max, "Photon-number truncation")
        ->check(CLI::PositiveNumber);
    auto *o_eta1 = demo_cmd->add_option("--eta1", eta1, "Efficiency of detector D1");
    auto *o_eta2 = demo_cmd->add_option("--eta2", eta2, "Efficiency of detector D2");
    auto *o_delta = demo_cmd->add_option("--delta", delta, "Relative loss mismatch");
    demo_cmd->add_option("--noise", demo.noise, "White-noise weight")
        ->check(CLI::Range(0.0, 1.0));
    demo_cmd->add_option("--count", demo.count, "Random scenarios");
    add_common(demo_cmd, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? exit_code::kOk : exit_code::kInputError;
    }

    CommandResult res;
    try {
        if (*check) {
            std::optional<std::filesystem::path> mq;
            if (!mq_path.empty()) {
                mq = mq_path;
            }
            res = cmd_check(input, mq, tol);
        } else if (*decompose) {
            res = cmd_decompose(input, output, trials, seed);
            output.clear();
        } else if (*simulate) {
            res = cmd_simulate(input, postselect, tol, seed);
        } else if (*bound) {
            res = cmd_bound(input, tol);
        } else {
            demo.seed = seed;
            demo.tol = tol;
            if (*o_eta1) {
                demo.eta1 = eta1;
            }
            if (*o_eta2) {
                demo.eta2 = eta2;
            }
            if (*o_delta) {
                demo.delta = delta;
            }
            res = cmd_demo(demo_name, demo);
        }
    } catch (const std::exception &e) {
        std::cerr << "fairsamp: " << e.what() << "\n";
        std::cout << dump(error_report(e));
        return exit_code::kInputError;
    }

    try {
        if (output.empty()) {
            std::cout << dump(res.report);
        } else {
            write_file_atomic(output, dump(res.report));
        }
    } catch (const std::exception &e) {
        std::cerr << "fairsamp: " << e.what() << "\n";
        return exit_code::kInputError;
    }
    return res.code;
}
