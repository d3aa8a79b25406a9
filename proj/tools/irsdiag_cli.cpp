// SPDX-License-Identifier: Apache-2.0
//
// irsdiag: over-the-air localization of stuck elements on reflecting surfaces
// Copyright (C) 2026 The irsdiag authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "irsdiag/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

using namespace irsdiag;

namespace
{
    struct Overrides
    {
        std::string config_path;
        std::uint64_t seed = 0;
        int trials = 0;
        std::string method;
        std::vector<double> power_dbm;
        std::vector<int> antennas;
        int threads = 0;
        double noise_dbm = 0.0;
        bool zero_noise = false;
    };

    void add_common(CLI::App *cmd, Overrides &o)
    {
        cmd->add_option("--config", o.config_path, "JSON experiment config");
        cmd->add_option("--seed", o.seed, "base seed");
        cmd->add_option("--trials", o.trials, "Monte-Carlo trials per sweep point");
        cmd->add_option("--method", o.method, "sortpm, bisect or both");
        cmd->add_option("--power-dbm", o.power_dbm, "transmit power grid in dBm")->delimiter(',');
        cmd->add_option("--antennas", o.antennas, "receive antenna counts")->delimiter(',');
        cmd->add_option("--threads", o.threads, "worker threads");
        cmd->add_option("--noise-dbm", o.noise_dbm, "noise power in dBm");
        cmd->add_flag("--zero-noise", o.zero_noise, "disable receiver noise");
    }

    ExperimentConfig build_config(const CLI::App *cmd, const Overrides &o)
    {
        ExperimentConfig cfg = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
        if (cmd->count("--seed"))
            cfg.base_seed = o.seed;
        if (cmd->count("--trials"))
            cfg.trials = o.trials;
        if (cmd->count("--method"))
            cfg.method = parse_method_selector(o.method);
        if (cmd->count("--power-dbm"))
            cfg.power_dbm = o.power_dbm;
        if (cmd->count("--antennas"))
            cfg.antennas = o.antennas;
        if (cmd->count("--threads"))
            cfg.threads = o.threads;
        if (cmd->count("--noise-dbm"))
            cfg.noise_dbm = o.noise_dbm;
        if (o.zero_noise)
            cfg.zero_noise = true;
        cfg.validate();
        return cfg;
    }

    void print_aggregates(const SweepResult &res)
    {
        std::printf("%-7s %8s %3s %9s %11s %10s\n", "method", "P_t_dBm", "M", "accuracy", "mean_slots", "converged");
        for (const Aggregate &a : res.aggregates)
            std::printf("%-7s %8g %3d %9.4f %11.2f %10.4f\n", to_string(a.method), a.point.p_t_dbm, a.point.antennas,
                        a.accuracy, a.mean_slots, a.converged_fraction);
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Over-the-air diagnosis of a stuck-element cluster on a reflecting surface"};
    app.require_subcommand(1);

    Overrides run_o, sweep_o, cal_o;
    auto *run = app.add_subcommand("run", "diagnose one sampled scene and print the details");
    add_common(run, run_o);
    int trial_index = 0;
    run->add_option("--trial", trial_index, "trial index selecting the scene and noise seeds");

    auto *sweep_cmd = app.add_subcommand("sweep", "run the sweep and write the per-trial CSV");
    add_common(sweep_cmd, sweep_o);
    std::string out_path = "sweep.csv";
    sweep_cmd->add_option("--out", out_path, "CSV output path");

    auto *repro = app.add_subcommand("repro-examples", "replay the scripted worked examples");

    auto *cal = app.add_subcommand("calibrate", "scan noise power for the operating regime");
    add_common(cal, cal_o);
    std::vector<double> grid;
    cal->add_option("--noise-grid", grid, "noise levels in dBm")->delimiter(',');
    std::string write_config;
    cal->add_option("--write-config", write_config, "save the config with the chosen noise level");

    auto *show = app.add_subcommand("show-config", "print the effective config as JSON");
    Overrides show_o;
    add_common(show, show_o);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*repro)
        {
            int failed = 0;
            for (const CheckResult &c : repro_examples())
            {
                std::printf("%s %s %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
                failed += c.passed ? 0 : 1;
            }
            return failed ? 1 : 0;
        }
        if (*show)
        {
            std::cout << config_to_json_text(build_config(show, show_o)) << '\n';
            return 0;
        }
        if (*run)
        {
            const ExperimentConfig cfg = build_config(run, run_o);
            if (trial_index < 0)
                throw config_error("trial must be non-negative");
            const SweepPoint point = sweep_points(cfg).front();
            const TrialSeeds seeds = trial_seeds(cfg, 0, trial_index);
            const auto results = run_trial(cfg, point, seeds, trial_index);
            char noise[32] = "off";
            if (!cfg.zero_noise)
                std::snprintf(noise, sizeof noise, "%g dBm", cfg.noise_dbm);
            std::printf("grid %dx%d, P_t %g dBm, M %d, noise %s, trial %d\n", cfg.n_h, cfg.n_v, point.p_t_dbm,
                        point.antennas, noise, trial_index);
            std::printf("true defect   %s\n", to_string(results.front().truth).c_str());
            for (const TrialResult &r : results)
            {
                std::printf("%-7s estimate %s %s, slots %d, rounds %d", to_string(r.method),
                            to_string(r.estimate).c_str(), r.correct ? "correct" : "WRONG", r.slots_used, r.rounds);
                if (r.method == Method::SortPM)
                    std::printf(", fallbacks %d, converged %s\n", r.fallbacks, r.converged ? "yes" : "no");
                else
                    std::printf(" (h %d, v %d), coercions %d\n", r.slots_h, r.slots_v, r.coercions);
            }
            return 0;
        }
        if (*sweep_cmd)
        {
            const SweepResult res = sweep(build_config(sweep_cmd, sweep_o));
            write_csv_file(out_path, res);
            print_aggregates(res);
            return 0;
        }
        if (*cal)
        {
            const ExperimentConfig cfg = build_config(cal, cal_o);
            if (grid.empty())
                for (double n = -80.0; n <= -40.0; n += 2.5)
                    grid.push_back(n);
            const CalibrationResult r = calibrate(cfg, grid);
            std::printf("%9s %10s %10s %10s %10s\n", "noise_dBm", "lo_sortpm", "lo_bisect", "hi_sortpm", "hi_bisect");
            for (const CalibrationRow &row : r.rows)
                std::printf("%9.2f %10.4f %10.4f %10.4f %10.4f\n", row.noise_dbm, row.acc_low_sortpm,
                            row.acc_low_bisect, row.acc_high_sortpm, row.acc_high_bisect);
            if (!r.found)
            {
                std::printf("no noise level satisfies the regime\n");
                return 1;
            }
            std::printf("chosen noise_dbm = %g\n", r.chosen_noise_dbm);
            if (!write_config.empty())
            {
                ExperimentConfig out = cfg;
                out.noise_dbm = r.chosen_noise_dbm;
                std::ofstream f(write_config);
                f << config_to_json_text(out) << '\n';
                if (!f)
                    throw std::runtime_error("cannot write '" + write_config + "'");
            }
            return 0;
        }
    }
    catch (const config_error &e)
    {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
