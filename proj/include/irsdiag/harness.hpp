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

#ifndef IRSDIAG_HARNESS_HPP
#define IRSDIAG_HARNESS_HPP

#include "irsdiag/bisect.hpp"
#include "irsdiag/sortpm.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace irsdiag
{
    class config_error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    enum class Method
    {
        SortPM,
        Bisect
    };

    enum class MethodSelector
    {
        SortPM,
        Bisect,
        Both
    };

    const char *to_string(Method m);
    MethodSelector parse_method_selector(const std::string &s);
    std::vector<Method> methods_of(MethodSelector sel);

    struct ExperimentConfig
    {
        int n_h = 32;
        int n_v = 32;
        int defect_h = 4; // columns covered by the sampled defect
        int defect_v = 4; // rows covered by the sampled defect
        std::vector<int> antennas{4};
        std::vector<double> power_dbm{0, 4, 8, 12, 16, 20};
        double noise_dbm = -80.0;
        bool zero_noise = false;
        double epsilon = 0.1;
        double q = 0.1;
        double alpha = 1e-3;
        int k_max = 200;
        int trials = 200;
        std::uint64_t base_seed = 1;
        MethodSelector method = MethodSelector::Both;
        int threads = 1;
        std::pair<double, double> init_phases{0.0, pi};
        std::pair<double, double> probe_phases{0.0, pi};
        LayoutParams layout;
        PathLoss path_loss;

        // Throws config_error naming the offending field
        void validate() const;
        GridDims dims() const { return {n_h, n_v}; }
        double noise_power() const { return zero_noise ? 0.0 : dbm_to_watts(noise_dbm); }
    };

    // JSON key/value tree; unknown keys are rejected, missing keys keep defaults
    ExperimentConfig load_config(const std::string &path);
    ExperimentConfig config_from_json_text(const std::string &text);
    std::string config_to_json_text(const ExperimentConfig &cfg);

    struct SweepPoint
    {
        double p_t_dbm = 16.0;
        int antennas = 4;
    };

    struct TrialResult
    {
        Method method = Method::SortPM;
        SweepPoint point;
        int trial = 0;
        std::uint64_t seed = 0;
        DefectRect truth;
        DefectRect estimate;
        bool correct = false;
        int slots_used = 0;
        bool converged = true;
        int rounds = 0;      // sortPM Q&A rounds or bisection iterations
        int fallbacks = 0;   // sortPM singleton substitutions
        int coercions = 0;   // bisection inadmissible verdicts
        int slots_h = 0;     // bisection slots per dimension
        int slots_v = 0;
    };

    // Seeds of one trial: the scene seed is shared by every sweep point so the
    // same surfaces are diagnosed at each power and antenna count.
    struct TrialSeeds
    {
        std::uint64_t scene = 0;
        std::uint64_t noise = 0;
    };

    std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);
    TrialSeeds trial_seeds(const ExperimentConfig &cfg, std::size_t point_index, int trial);

    // Uniform placement of a defect_h x defect_v rectangle, stuck phases uniform on (0, 2 pi]
    FailureScene sample_scene(const ExperimentConfig &cfg, std::uint64_t scene_seed);

    std::vector<TrialResult> run_trial(const ExperimentConfig &cfg, const SweepPoint &point, const TrialSeeds &seeds,
                                       int trial_index = 0);

    // Both estimators on a given scene; used by run_trial and the regression checks
    std::vector<TrialResult> diagnose_scene(const ExperimentConfig &cfg, const SweepPoint &point,
                                            const FailureScene &scene, std::uint64_t noise_seed);

    struct Aggregate
    {
        Method method = Method::SortPM;
        SweepPoint point;
        int trials = 0;
        double accuracy = 0.0;
        double mean_slots = 0.0;
        double converged_fraction = 0.0;
    };

    struct SweepResult
    {
        std::vector<SweepPoint> points;
        std::vector<TrialResult> trials;    // CSV order
        std::vector<Aggregate> aggregates;  // per point, per method
    };

    // Sweep points in order: antennas outer, transmit power inner
    std::vector<SweepPoint> sweep_points(const ExperimentConfig &cfg);

    SweepResult sweep(const ExperimentConfig &cfg);

    inline constexpr int csv_schema_version = 1;
    std::string csv_header();
    void write_csv(std::ostream &os, const SweepResult &result);
    // Throws std::runtime_error when the file cannot be written
    void write_csv_file(const std::string &path, const SweepResult &result);

    struct CheckResult
    {
        std::string name;
        bool passed = false;
        std::string detail;
    };

    // Scripted reproduction of the worked examples; one entry per assertion
    std::vector<CheckResult> repro_examples();

    struct CalibrationRow
    {
        double noise_dbm = 0.0;
        double acc_low_sortpm = 0.0;
        double acc_low_bisect = 0.0;
        double acc_high_sortpm = 0.0;
        double acc_high_bisect = 0.0;
    };

    struct CalibrationResult
    {
        std::vector<CalibrationRow> rows;
        bool found = false;
        double chosen_noise_dbm = 0.0;
    };

    // Scans noise power for the regime where accuracy at the lowest transmit
    // power is below 50% and both methods reach at least 98% at the highest.
    CalibrationResult calibrate(const ExperimentConfig &cfg, const std::vector<double> &noise_grid_dbm);
}

#endif // IRSDIAG_HARNESS_HPP
