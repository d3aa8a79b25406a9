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

#include "irsdiag/airlink.hpp"

#include <cmath>

namespace irsdiag
{
    cdouble NoiseSource::complex_gaussian(double variance)
    {
        const double s = std::sqrt(variance / 2.0);
        const double re = normal_(engine_);
        const double im = normal_(engine_);
        return {s * re, s * im};
    }

    CVec noiseless_signal(const FailureScene &scene, const PhaseAssignment &assign, const ChannelSet &ch, cdouble pilot)
    {
        const GridDims &dims = scene.dims();
        if (!(dims == ch.dims()))
            throw parameter_error("received_signal: scene and channel grids differ");
        if (assign.size() != dims.size())
            throw parameter_error("received_signal: assignment does not cover the grid");

        const std::size_t M = ch.antennas();
        CVec acc = ch.h();
        for (std::size_t n = 0; n < dims.size(); ++n)
        {
            const Element e = dims.element_at(n);
            const double phase = scene.is_defective(e) ? scene.stuck_phase(e) : assign[n];
            const cdouble theta = std::polar(1.0, phase);
            const auto g = ch.g(n);
            for (std::size_t m = 0; m < M; ++m)
                acc[m] += theta * g[m];
        }
        for (auto &v : acc)
            v *= pilot;
        return acc;
    }

    Measurement received_signal(const FailureScene &scene, const PhaseAssignment &assign, const ChannelSet &ch,
                                cdouble pilot, NoiseSource &rng, SlotTag tag)
    {
        Measurement meas{noiseless_signal(scene, assign, ch, pilot), pilot, tag};
        const double sigma2 = ch.noise_power();
        if (sigma2 > 0.0)
            for (auto &v : meas.y)
                v += rng.complex_gaussian(sigma2);
        return meas;
    }

    InitEstimates ml_aggregate_estimates(const CVec &y_minus, const CVec &y_plus, const CVec &h,
                                         std::pair<cdouble, cdouble> pilots, std::pair<double, double> phases)
    {
        const auto [x_minus, x_plus] = pilots;
        if (x_minus == cdouble{} || x_plus == cdouble{})
            throw parameter_error("initialization: pilots must be nonzero");
        const cdouble e_minus = std::polar(1.0, phases.first);
        const cdouble e_plus = std::polar(1.0, phases.second);
        // equal phases modulo 2 pi leave the two slots linearly dependent
        if (std::abs(e_plus - e_minus) < 1e-12)
            throw parameter_error("initialization: the two phases must differ (singular design)");
        if (y_minus.size() != h.size() || y_plus.size() != h.size())
            throw parameter_error("initialization: measurement length differs from antenna count");

        const cdouble denom = x_minus * x_plus * (e_plus - e_minus);
        InitEstimates est;
        est.g_e_hat.resize(h.size());
        est.g_w_hat.resize(h.size());
        for (std::size_t m = 0; m < h.size(); ++m)
        {
            const cdouble a = y_minus[m] - h[m] * x_minus;
            const cdouble b = y_plus[m] - h[m] * x_plus;
            est.g_e_hat[m] = (e_plus * x_plus * a - e_minus * x_minus * b) / denom;
            est.g_w_hat[m] = (x_minus * b - x_plus * a) / denom;
        }
        est.phases_used = phases;
        est.pilots_used = pilots;
        return est;
    }

    InitEstimates run_initialization(const FailureScene &scene, const ChannelSet &ch,
                                     std::pair<cdouble, cdouble> pilots, std::pair<double, double> phases,
                                     NoiseSource &rng)
    {
        if (pilots.first == cdouble{} || pilots.second == cdouble{})
            throw parameter_error("initialization: pilots must be nonzero");
        if (std::abs(std::polar(1.0, phases.first) - std::polar(1.0, phases.second)) < 1e-12)
            throw parameter_error("initialization: the two phases must differ (singular design)");

        const GridDims &dims = scene.dims();
        const Measurement y_minus = received_signal(scene, PhaseAssignment(dims, phases.first), ch, pilots.first, rng,
                                                    SlotTag::init_minus);
        const Measurement y_plus = received_signal(scene, PhaseAssignment(dims, phases.second), ch, pilots.second, rng,
                                                   SlotTag::init_plus);
        return ml_aggregate_estimates(y_minus.y, y_plus.y, ch.h(), pilots, phases);
    }
}
