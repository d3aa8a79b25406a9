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

#ifndef IRSDIAG_AIRLINK_HPP
#define IRSDIAG_AIRLINK_HPP

#include "irsdiag/channel.hpp"
#include "irsdiag/core_model.hpp"

#include <cstdint>
#include <random>
#include <utility>

namespace irsdiag
{
    // Seeded source of circularly-symmetric complex Gaussian samples
    class NoiseSource
    {
    public:
        explicit NoiseSource(std::uint64_t seed) : engine_(seed) {}

        // One CN(0, variance) sample: each real dimension has variance / 2
        cdouble complex_gaussian(double variance);

        std::mt19937_64 &engine() { return engine_; }

    private:
        std::mt19937_64 engine_;
        std::normal_distribution<double> normal_{0.0, 1.0};
    };

    enum class SlotTag
    {
        init_minus,
        init_plus,
        region,
        side_region,
        boundary,
        custom
    };

    struct Measurement
    {
        CVec y;
        cdouble pilot;
        SlotTag slot_tag = SlotTag::custom;
    };

    // y = h x + sum_E e^{j beta} g x + sum_W e^{j phi} g x + z,  z ~ CN(0, sigma^2 I)
    Measurement received_signal(const FailureScene &scene, const PhaseAssignment &assign, const ChannelSet &ch,
                                cdouble pilot, NoiseSource &rng, SlotTag tag = SlotTag::custom);

    // Noiseless received signal (the deterministic part of received_signal)
    CVec noiseless_signal(const FailureScene &scene, const PhaseAssignment &assign, const ChannelSet &ch, cdouble pilot);

    struct InitEstimates
    {
        CVec g_e_hat; // aggregate stuck cascade, sum_E e^{j beta} g
        CVec g_w_hat; // aggregate normal cascade, sum_W g
        std::pair<double, double> phases_used;  // (minus, plus)
        std::pair<cdouble, cdouble> pilots_used; // (minus, plus)
    };

    // Closed-form ML estimates of the two aggregate cascades from two uniform-phase slots
    InitEstimates ml_aggregate_estimates(const CVec &y_minus, const CVec &y_plus, const CVec &h,
                                         std::pair<cdouble, cdouble> pilots, std::pair<double, double> phases);

    // Transmits the two initialization slots and returns the ML estimates
    InitEstimates run_initialization(const FailureScene &scene, const ChannelSet &ch,
                                     std::pair<cdouble, cdouble> pilots, std::pair<double, double> phases,
                                     NoiseSource &rng);
}

#endif // IRSDIAG_AIRLINK_HPP
