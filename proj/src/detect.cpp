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

#include "irsdiag/detect.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace irsdiag
{
    const char *to_string(CaseLabel c)
    {
        switch (c)
        {
        case CaseLabel::A:
            return "CaseA";
        case CaseLabel::B:
            return "CaseB";
        case CaseLabel::One:
            return "Case1";
        case CaseLabel::Two:
            return "Case2";
        case CaseLabel::Three:
            return "Case3";
        }
        return "?";
    }

    const HypothesisTest *CaseVerdict::test(CaseLabel c) const
    {
        for (const auto &[label, t] : tests)
            if (label == c)
                return &t;
        return nullptr;
    }

    double chi_square_quantile(int dof, double probability)
    {
        if (dof <= 0)
            throw parameter_error("chi_square_quantile: degrees of freedom must be positive");
        if (!(probability > 0.0 && probability < 1.0))
            throw parameter_error("chi_square_quantile: probability must lie in (0, 1)");
        const boost::math::chi_squared dist(static_cast<double>(dof));
        return boost::math::quantile(boost::math::complement(dist, 1.0 - probability));
    }

    double residual_variance_factor(const InitEstimates &init, cdouble pilot, double aggregate_phase)
    {
        const cdouble e_minus = std::polar(1.0, init.phases_used.first);
        const cdouble e_plus = std::polar(1.0, init.phases_used.second);
        const cdouble e_rest = std::polar(1.0, aggregate_phase);
        const double spread = std::norm(e_plus - e_minus);
        const double propagated = std::norm(e_plus - e_rest) / std::norm(init.pilots_used.first) +
                                  std::norm(e_rest - e_minus) / std::norm(init.pilots_used.second);
        return 1.0 + std::norm(pilot) * propagated / spread;
    }

    double energy_threshold(const ChannelSet &ch, const InitEstimates &init, cdouble pilot, double aggregate_phase,
                            double alpha, double numeric_floor)
    {
        if (!(alpha > 0.0 && alpha < 1.0))
            throw parameter_error("energy_threshold: alpha must lie in (0, 1)");
        const int dof = 2 * static_cast<int>(ch.antennas());
        const double kappa = residual_variance_factor(init, pilot, aggregate_phase);
        const double statistical = kappa * ch.noise_power() / 2.0 * chi_square_quantile(dof, 1.0 - alpha);

        double h_norm = 0.0;
        for (const auto &v : ch.h())
            h_norm += std::norm(v);
        const double floor_amp = numeric_floor * std::abs(pilot) * (std::sqrt(h_norm) + ch.gain_scale());
        return statistical + floor_amp * floor_amp;
    }

    HypothesisTest test_aggregate_model(const Measurement &meas, const InitEstimates &init, const ChannelSet &ch,
                                        const CVec &known, double phase_known, double phase_rest,
                                        const DetectorConfig &cfg)
    {
        const std::size_t M = ch.antennas();
        if (meas.y.size() != M || init.g_e_hat.size() != M || init.g_w_hat.size() != M || known.size() != M)
            throw parameter_error("detector: measurement and channel antenna counts differ");

        const cdouble x = meas.pilot;
        const cdouble e_known = std::polar(1.0, phase_known);
        const cdouble e_rest = std::polar(1.0, phase_rest);
        double energy = 0.0;
        for (std::size_t m = 0; m < M; ++m)
        {
            const cdouble model = ch.h()[m] + init.g_e_hat[m] + e_known * known[m] + e_rest * (init.g_w_hat[m] - known[m]);
            energy += std::norm(meas.y[m] - model * x);
        }

        HypothesisTest t;
        t.residual_energy = energy;
        t.energy_threshold = energy_threshold(ch, init, x, phase_rest, cfg.alpha, cfg.numeric_floor);
        t.accepted = energy < t.energy_threshold;
        const double sigma2 = ch.noise_power();
        if (sigma2 > 0.0)
        {
            const double norm_term = -static_cast<double>(M) * std::log(pi * sigma2);
            t.loglik = norm_term - energy / sigma2;
            t.log_threshold = norm_term - t.energy_threshold / sigma2;
        }
        else
        {
            t.loglik = -energy;
            t.log_threshold = -t.energy_threshold;
        }
        return t;
    }

    double loglik_region_normal(const Measurement &meas, const InitEstimates &init, const RegionQuery &query,
                                const ChannelSet &ch, std::pair<double, double> phases)
    {
        DetectorConfig cfg;
        cfg.phase_in = phases.first;
        cfg.phase_out = phases.second;
        const CVec g_in = ch.lines_sum(query.orientation, query.lines);
        return test_aggregate_model(meas, init, ch, g_in, cfg.phase_in, cfg.phase_out, cfg).loglik;
    }

    CaseVerdict classify_region(const Measurement &meas, const InitEstimates &init, const RegionQuery &query,
                                const ChannelSet &ch, const DetectorConfig &cfg)
    {
        CaseVerdict v;
        if (query.lines.empty())
        {
            // vacuous region
            v.label = CaseLabel::A;
            return v;
        }
        const CVec g_in = ch.lines_sum(query.orientation, query.lines);
        const HypothesisTest t = test_aggregate_model(meas, init, ch, g_in, cfg.phase_in, cfg.phase_out, cfg);
        v.label = t.accepted ? CaseLabel::A : CaseLabel::B;
        v.tests.emplace_back(CaseLabel::A, t);
        return v;
    }

    namespace
    {
        std::vector<int> line_range(int first, int last)
        {
            std::vector<int> out;
            for (int l = first; l <= last; ++l)
                out.push_back(l);
            return out;
        }

        void validate_cut(const BoundaryQuery &bq, int n_lines)
        {
            if (!(bq.cut > 1.0 && bq.cut < n_lines) || std::floor(bq.cut) == bq.cut)
                throw parameter_error("boundary cut " + std::to_string(bq.cut) + " must be a non-integer in (1, " +
                                      std::to_string(n_lines) + ")");
        }
    }

    CaseVerdict classify_boundary(const Measurement &meas, const InitEstimates &init, const BoundaryQuery &bq,
                                  const ChannelSet &ch, const DetectorConfig &cfg)
    {
        const int n_lines = ch.dims().lines(bq.orientation);
        validate_cut(bq, n_lines);
        const double phase_left = cfg.phase_in;
        const double phase_right = cfg.phase_out;

        // Case 1: right side normal; Case 2: left side normal
        const CVec g_right = ch.lines_sum(bq.orientation, line_range(bq.first_right(), n_lines));
        const CVec g_left = ch.lines_sum(bq.orientation, line_range(1, bq.last_left()));
        const HypothesisTest c1 = test_aggregate_model(meas, init, ch, g_right, phase_right, phase_left, cfg);
        const HypothesisTest c2 = test_aggregate_model(meas, init, ch, g_left, phase_left, phase_right, cfg);

        CaseVerdict v;
        v.tests.emplace_back(CaseLabel::One, c1);
        v.tests.emplace_back(CaseLabel::Two, c2);
        if (c1.accepted && c2.accepted)
            v.label = c1.loglik >= c2.loglik ? CaseLabel::One : CaseLabel::Two;
        else if (c1.accepted)
            v.label = CaseLabel::One;
        else if (c2.accepted)
            v.label = CaseLabel::Two;
        else
            v.label = CaseLabel::Three;
        return v;
    }

    RegionQuery side_region(const RegionQuery &s, Side side, int n_lines)
    {
        if (s.lines.empty())
            throw parameter_error("side_region: empty query set");
        const auto [lo, hi] = std::minmax_element(s.lines.begin(), s.lines.end());
        RegionQuery out{s.orientation, {}};
        if (side == Side::Left)
            out.lines = line_range(1, *lo - 1);
        else
            out.lines = line_range(*hi + 1, n_lines);
        return out;
    }

    OverTheAirProber::OverTheAirProber(const FailureScene &scene, const ChannelSet &ch, const InitEstimates &init,
                                       cdouble pilot, DetectorConfig cfg)
        : scene_(scene), ch_(ch), init_(init), pilot_(pilot), cfg_(cfg)
    {
        if (pilot_ == cdouble{})
            throw parameter_error("prober: pilot must be nonzero");
        if (std::abs(std::polar(1.0, cfg_.phase_in) - std::polar(1.0, cfg_.phase_out)) < 1e-12)
            throw parameter_error("prober: inside and outside phases must differ");
    }

    CaseVerdict OverTheAirProber::probe_region(const RegionQuery &query, NoiseSource &rng, int *slots) const
    {
        if (query.lines.empty())
            return classify_region(Measurement{}, init_, query, ch_, cfg_);
        const PhaseAssignment assign =
            PhaseAssignment::split_lines(scene_.dims(), query.orientation, query.lines, cfg_.phase_in, cfg_.phase_out);
        const Measurement meas = received_signal(scene_, assign, ch_, pilot_, rng, SlotTag::region);
        if (slots)
            ++*slots;
        return classify_region(meas, init_, query, ch_, cfg_);
    }

    Answer OverTheAirProber::answer(const RegionQuery &s, Side side, NoiseSource &rng) const
    {
        Answer a;
        const CaseVerdict inside = probe_region(s, rng, &a.slots);
        if (inside.label == CaseLabel::A)
            return a;
        const RegionQuery beyond = side_region(s, side, scene_.dims().lines(s.orientation));
        const CaseVerdict outside = probe_region(beyond, rng, &a.slots);
        a.bit = outside.label == CaseLabel::A ? 1 : 0;
        return a;
    }

    CaseVerdict OverTheAirProber::probe_boundary(const BoundaryQuery &bq, NoiseSource &rng) const
    {
        validate_cut(bq, scene_.dims().lines(bq.orientation));
        const PhaseAssignment assign = PhaseAssignment::split_lines(
            scene_.dims(), bq.orientation, line_range(1, bq.last_left()), cfg_.phase_in, cfg_.phase_out);
        const Measurement meas = received_signal(scene_, assign, ch_, pilot_, rng, SlotTag::boundary);
        return classify_boundary(meas, init_, bq, ch_, cfg_);
    }
}
