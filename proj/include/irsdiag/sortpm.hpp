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

#ifndef IRSDIAG_SORTPM_HPP
#define IRSDIAG_SORTPM_HPP

#include "irsdiag/detect.hpp"

#include <functional>

namespace irsdiag
{
    // Posterior over candidates 1..D (stored 0-based) after `round` answers
    struct PosteriorState
    {
        std::vector<double> probs;
        int round = 0;

        static PosteriorState uniform(int candidates);
        int candidates() const { return static_cast<int>(probs.size()); }
        double prob(int candidate) const { return probs.at(static_cast<std::size_t>(candidate - 1)); }
    };

    // Candidates (1-based) ordered by non-increasing posterior; ties keep ascending index
    struct SortedView
    {
        std::vector<int> order;
        std::vector<double> sorted_probs;
    };

    SortedView sorted_view(const PosteriorState &state);

    struct QuerySet
    {
        std::vector<int> members; // 1-based candidates, ascending
        bool contiguous = true;

        bool contains(int candidate) const;
    };

    // Bayesian update under a lie probability q in (0, 0.5)
    PosteriorState posterior_update(const PosteriorState &state, const QuerySet &query, int answer, double q);

    // Top-posterior prefix whose mass is closest to 1/2 (smallest prefix on ties)
    QuerySet design_query(const PosteriorState &state);

    struct SortPMParams
    {
        double q = 0.1;        // lie probability assumed by the update
        double epsilon = 0.1;  // stop once the top posterior reaches 1 - epsilon
        int k_max = 200;
    };

    struct RoundRecord
    {
        QuerySet query;   // set actually asked
        int answer = 0;
        std::vector<double> posterior; // after the update
    };

    struct SortPMResult
    {
        int estimate = 1;
        int rounds = 0;
        bool converged = false;
        int fallbacks = 0; // non-contiguous designs replaced by the top singleton
        PosteriorState final_state;
        std::vector<RoundRecord> history; // filled when requested
    };

    using Oracle = std::function<int(const QuerySet &)>;

    // Asked-set policy applied to each designed query (identity by default)
    using QueryPolicy = std::function<QuerySet(const QuerySet &designed, const PosteriorState &state, bool &fallback)>;

    // Generic sorted posterior matching against a possibly lying responder
    SortPMResult run_sortpm_generic(const Oracle &oracle, int candidates, const SortPMParams &params,
                                    bool record_history = false, const QueryPolicy &policy = {});

    // Non-contiguous designs are replaced by the singleton of the top candidate
    QuerySet contiguous_or_top(const QuerySet &designed, const PosteriorState &state, bool &fallback);

    enum class BoundaryTarget
    {
        HMin,
        HMax,
        VMin,
        VMax
    };

    const char *to_string(BoundaryTarget t);
    Orientation orientation_of(BoundaryTarget t);
    bool is_max_target(BoundaryTarget t);

    // Candidate d maps to line d for minimum boundaries and to line N + 1 - d for
    // maximum boundaries, so the same left-side machinery serves both.
    int candidate_to_line(BoundaryTarget t, int candidate, int n_lines);

    struct BoundaryEstimate
    {
        int index = 1; // estimated line
        int slots = 0;
        SortPMResult search;
    };

    // Sorted posterior matching over the lines of one boundary, answered over the air
    BoundaryEstimate estimate_boundary_sortpm(BoundaryTarget target, const OverTheAirProber &prober,
                                              const SortPMParams &params, NoiseSource &rng,
                                              bool record_history = false);

    // Same search with answers supplied by any responder working in line space
    BoundaryEstimate estimate_boundary_sortpm(BoundaryTarget target, int n_lines,
                                              const std::function<Answer(const RegionQuery &, Side)> &responder,
                                              const SortPMParams &params, bool record_history = false);
}

#endif // IRSDIAG_SORTPM_HPP
