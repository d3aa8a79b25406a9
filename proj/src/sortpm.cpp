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

#include "irsdiag/sortpm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace irsdiag
{
    PosteriorState PosteriorState::uniform(int candidates)
    {
        if (candidates < 1)
            throw parameter_error("posterior: at least one candidate required");
        return {std::vector<double>(static_cast<std::size_t>(candidates), 1.0 / candidates), 0};
    }

    SortedView sorted_view(const PosteriorState &state)
    {
        SortedView v;
        v.order.resize(state.probs.size());
        std::iota(v.order.begin(), v.order.end(), 1);
        std::stable_sort(v.order.begin(), v.order.end(),
                         [&](int a, int b) { return state.probs[a - 1] > state.probs[b - 1]; });
        v.sorted_probs.reserve(v.order.size());
        for (int d : v.order)
            v.sorted_probs.push_back(state.probs[d - 1]);
        return v;
    }

    bool QuerySet::contains(int candidate) const
    {
        return std::binary_search(members.begin(), members.end(), candidate);
    }

    namespace
    {
        bool consecutive(const std::vector<int> &sorted)
        {
            for (std::size_t i = 1; i < sorted.size(); ++i)
                if (sorted[i] != sorted[i - 1] + 1)
                    return false;
            return true;
        }

        QuerySet make_query(std::vector<int> members)
        {
            std::sort(members.begin(), members.end());
            QuerySet q;
            q.contiguous = consecutive(members);
            q.members = std::move(members);
            return q;
        }

        double top_probability(const PosteriorState &state)
        {
            return *std::max_element(state.probs.begin(), state.probs.end());
        }
    }

    PosteriorState posterior_update(const PosteriorState &state, const QuerySet &query, int answer, double q)
    {
        if (!(q > 0.0 && q < 0.5))
            throw parameter_error("posterior_update: lie probability must lie in (0, 0.5)");
        if (answer != 0 && answer != 1)
            throw parameter_error("posterior_update: answer must be 0 or 1");

        const int D = state.candidates();
        std::vector<bool> member(static_cast<std::size_t>(D), false);
        for (int d : query.members)
        {
            if (d < 1 || d > D)
                throw index_error("posterior_update: candidate " + std::to_string(d) + " outside 1.." + std::to_string(D));
            member[d - 1] = true;
        }

        // answer 1 favours members, answer 0 favours non-members
        const double w_member = answer == 1 ? 1.0 - q : q;
        const double w_other = answer == 1 ? q : 1.0 - q;

        PosteriorState next{state.probs, state.round + 1};
        double total = 0.0;
        for (int i = 0; i < D; ++i)
        {
            next.probs[i] *= member[i] ? w_member : w_other;
            total += next.probs[i];
        }
        if (!(total > 0.0))
            throw parameter_error("posterior_update: posterior has no mass");
        for (auto &p : next.probs)
            p /= total;
        return next;
    }

    QuerySet design_query(const PosteriorState &state)
    {
        const SortedView view = sorted_view(state);
        constexpr double tie_tolerance = 1e-12;
        std::size_t best_len = 1;
        double best_gap = std::abs(view.sorted_probs[0] - 0.5);
        double mass = view.sorted_probs[0];
        for (std::size_t l = 2; l <= view.sorted_probs.size(); ++l)
        {
            mass += view.sorted_probs[l - 1];
            const double gap = std::abs(mass - 0.5);
            if (gap < best_gap - tie_tolerance)
            {
                best_gap = gap;
                best_len = l;
            }
        }
        return make_query(std::vector<int>(view.order.begin(), view.order.begin() + static_cast<std::ptrdiff_t>(best_len)));
    }

    QuerySet contiguous_or_top(const QuerySet &designed, const PosteriorState &state, bool &fallback)
    {
        fallback = !designed.contiguous;
        if (!fallback)
            return designed;
        return make_query({sorted_view(state).order.front()});
    }

    SortPMResult run_sortpm_generic(const Oracle &oracle, int candidates, const SortPMParams &params,
                                    bool record_history, const QueryPolicy &policy)
    {
        if (!(params.q > 0.0 && params.q < 0.5))
            throw parameter_error("sortPM: lie probability must lie in (0, 0.5)");
        if (!(params.epsilon > 0.0 && params.epsilon < 1.0))
            throw parameter_error("sortPM: epsilon must lie in (0, 1)");
        if (params.k_max < 1)
            throw parameter_error("sortPM: k_max must be at least 1");

        SortPMResult res;
        PosteriorState state = PosteriorState::uniform(candidates);
        const double target = 1.0 - params.epsilon;
        res.converged = top_probability(state) >= target;

        while (!res.converged && state.round < params.k_max)
        {
            const QuerySet designed = design_query(state);
            bool fallback = false;
            const QuerySet asked = policy ? policy(designed, state, fallback) : designed;
            if (fallback)
                ++res.fallbacks;
            const int answer = oracle(asked);
            state = posterior_update(state, asked, answer, params.q);
            if (record_history)
                res.history.push_back({asked, answer, state.probs});
            res.converged = top_probability(state) >= target;
        }

        res.rounds = state.round;
        res.estimate = sorted_view(state).order.front();
        res.final_state = std::move(state);
        return res;
    }

    const char *to_string(BoundaryTarget t)
    {
        switch (t)
        {
        case BoundaryTarget::HMin:
            return "h_min";
        case BoundaryTarget::HMax:
            return "h_max";
        case BoundaryTarget::VMin:
            return "v_min";
        case BoundaryTarget::VMax:
            return "v_max";
        }
        return "?";
    }

    Orientation orientation_of(BoundaryTarget t)
    {
        return t == BoundaryTarget::HMin || t == BoundaryTarget::HMax ? Orientation::horizontal : Orientation::vertical;
    }

    bool is_max_target(BoundaryTarget t)
    {
        return t == BoundaryTarget::HMax || t == BoundaryTarget::VMax;
    }

    int candidate_to_line(BoundaryTarget t, int candidate, int n_lines)
    {
        if (candidate < 1 || candidate > n_lines)
            throw index_error("candidate " + std::to_string(candidate) + " outside 1.." + std::to_string(n_lines));
        return is_max_target(t) ? n_lines + 1 - candidate : candidate;
    }

    BoundaryEstimate estimate_boundary_sortpm(BoundaryTarget target, int n_lines,
                                              const std::function<Answer(const RegionQuery &, Side)> &responder,
                                              const SortPMParams &params, bool record_history)
    {
        const Orientation o = orientation_of(target);
        const Side side = is_max_target(target) ? Side::Right : Side::Left;

        BoundaryEstimate out;
        const Oracle oracle = [&](const QuerySet &q) {
            RegionQuery region{o, {}};
            for (int d : q.members)
                region.lines.push_back(candidate_to_line(target, d, n_lines));
            std::sort(region.lines.begin(), region.lines.end());
            const Answer a = responder(region, side);
            out.slots += a.slots;
            return a.bit;
        };
        out.search = run_sortpm_generic(oracle, n_lines, params, record_history, contiguous_or_top);
        out.index = candidate_to_line(target, out.search.estimate, n_lines);
        return out;
    }

    BoundaryEstimate estimate_boundary_sortpm(BoundaryTarget target, const OverTheAirProber &prober,
                                              const SortPMParams &params, NoiseSource &rng, bool record_history)
    {
        const int n_lines = prober.dims().lines(orientation_of(target));
        return estimate_boundary_sortpm(
            target, n_lines, [&](const RegionQuery &s, Side side) { return prober.answer(s, side, rng); }, params,
            record_history);
    }
}
