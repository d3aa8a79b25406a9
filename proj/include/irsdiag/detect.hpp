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

#ifndef IRSDIAG_DETECT_HPP
#define IRSDIAG_DETECT_HPP

#include "irsdiag/airlink.hpp"

#include <optional>
#include <utility>

namespace irsdiag
{
    // Column (or row) sub-region of the surface; vertical queries list rows
    struct RegionQuery
    {
        Orientation orientation = Orientation::horizontal;
        std::vector<int> lines;
    };

    // Cut between two adjacent lines, e.g. 2.5 separates lines 2 and 3
    struct BoundaryQuery
    {
        Orientation orientation = Orientation::horizontal;
        double cut = 1.5;

        int last_left() const { return static_cast<int>(std::floor(cut)); }
        int first_right() const { return static_cast<int>(std::ceil(cut)); }
    };

    enum class CaseLabel
    {
        A,     // region holds no defective element
        B,     // region holds some defective element
        One,   // every defect left of the cut
        Two,   // every defect right of the cut
        Three  // defects on both sides
    };

    const char *to_string(CaseLabel c);

    // Residual-energy test of one aggregate-channel hypothesis.
    // accepted <=> residual_energy < energy_threshold <=> loglik > log_threshold.
    // With zero noise power the likelihood is degenerate; loglik then carries
    // -residual_energy and log_threshold carries -energy_threshold.
    struct HypothesisTest
    {
        double residual_energy = 0.0;
        double energy_threshold = 0.0;
        double loglik = 0.0;
        double log_threshold = 0.0;
        bool accepted = false;
    };

    struct CaseVerdict
    {
        CaseLabel label = CaseLabel::A;
        // Case A test for region verdicts; Case 1 and Case 2 tests for boundary verdicts
        std::vector<std::pair<CaseLabel, HypothesisTest>> tests;

        const HypothesisTest *test(CaseLabel c) const;
    };

    struct DetectorConfig
    {
        double alpha = 1e-3;          // false-reject probability of each test
        double phase_in = 0.0;        // region probing: inside / left of cut
        double phase_out = pi;        // region probing: outside / right of cut
        double numeric_floor = 1e-9;  // relative residual floor for noiseless runs
    };

    // Upper quantile of chi-square with `dof` degrees of freedom
    double chi_square_quantile(int dof, double probability);

    // Ratio of the true-hypothesis residual variance to sigma^2.  The residual
    // carries the slot noise plus the propagated noise of both initialization
    // estimates; `aggregate_phase` is the phase that multiplies g_w_hat in the model.
    double residual_variance_factor(const InitEstimates &init, cdouble pilot, double aggregate_phase);

    // Residual energy bound tau = kappa sigma^2 / 2 * Q(2M, 1 - alpha), plus a
    // relative floor so that noiseless runs tolerate floating-point rounding.
    double energy_threshold(const ChannelSet &ch, const InitEstimates &init, cdouble pilot, double aggregate_phase,
                            double alpha, double numeric_floor = 1e-9);

    // Tests y against h + g_e_hat + e^{j phase_known} known + e^{j phase_rest} (g_w_hat - known)
    HypothesisTest test_aggregate_model(const Measurement &meas, const InitEstimates &init, const ChannelSet &ch,
                                        const CVec &known, double phase_known, double phase_rest,
                                        const DetectorConfig &cfg);

    // log p(y | Case A) for a region probed with (phase_in, phase_out)
    double loglik_region_normal(const Measurement &meas, const InitEstimates &init, const RegionQuery &query,
                                const ChannelSet &ch, std::pair<double, double> phases);

    CaseVerdict classify_region(const Measurement &meas, const InitEstimates &init, const RegionQuery &query,
                                const ChannelSet &ch, const DetectorConfig &cfg);

    // Case 1 / 2 / 3 for a cut probed with (phase_in, phase_out) on (left, right)
    CaseVerdict classify_boundary(const Measurement &meas, const InitEstimates &init, const BoundaryQuery &bq,
                                  const ChannelSet &ch, const DetectorConfig &cfg);

    // Which side of the query set must be clear of defects for a "yes" answer:
    // Left when searching a minimum boundary, Right for a maximum boundary.
    enum class Side
    {
        Left,
        Right
    };

    struct Answer
    {
        int bit = 0;
        int slots = 0;
    };

    // Runs probing slots against a simulated surface using the shared
    // initialization estimates.  Every method spends exactly the slots it reports.
    class OverTheAirProber
    {
    public:
        OverTheAirProber(const FailureScene &scene, const ChannelSet &ch, const InitEstimates &init, cdouble pilot,
                         DetectorConfig cfg = {});

        // One slot; an empty region is Case A without a slot
        CaseVerdict probe_region(const RegionQuery &query, NoiseSource &rng, int *slots = nullptr) const;

        // Two-slot answer to "is the boundary in S?": the first slot probes S;
        // only when S holds defects does the second slot probe the lines beyond
        // S on `side`.
        Answer answer(const RegionQuery &s, Side side, NoiseSource &rng) const;

        CaseVerdict probe_boundary(const BoundaryQuery &bq, NoiseSource &rng) const;

        const DetectorConfig &config() const { return cfg_; }
        const GridDims &dims() const { return scene_.dims(); }

    private:
        const FailureScene &scene_;
        const ChannelSet &ch_;
        const InitEstimates &init_;
        cdouble pilot_;
        DetectorConfig cfg_;
    };

    // Lines strictly left of min(S) (Side::Left) or strictly right of max(S)
    RegionQuery side_region(const RegionQuery &s, Side side, int n_lines);
}

#endif // IRSDIAG_DETECT_HPP
