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

#ifndef IRSDIAG_BISECT_HPP
#define IRSDIAG_BISECT_HPP

#include "irsdiag/detect.hpp"

#include <functional>

namespace irsdiag
{
    enum class BisectionPhase
    {
        I,   // joint interval for both boundaries
        II,  // minimum boundary only
        III, // maximum boundary only
        Done
    };

    const char *to_string(BisectionPhase p);

    // Bounds on (n_min, n_max) along one dimension
    struct BisectionState
    {
        int lb_min = 1;
        int ub_min = 1;
        int lb_max = 1;
        int ub_max = 1;
        BisectionPhase phase = BisectionPhase::I;
        int slots_used = 0;
        int coercions = 0; // verdicts impossible for the active phase

        static BisectionState initial(int n_lines);

        // Midpoint of the active interval; integer midpoints move half a line right
        double next_cut() const;

        friend bool operator==(const BisectionState &, const BisectionState &) = default;
    };

    // Applies one verdict taken at next_cut().  Case 1 in Phase II and Case 2 in
    // Phase III cannot happen noiselessly; they are replaced by the admissible
    // neighbour whose hypothesis test passed, else Case 3.
    BisectionState bisection_step(const BisectionState &state, const CaseVerdict &verdict);

    struct BisectionStep
    {
        double cut = 0.0;
        CaseLabel verdict = CaseLabel::Three;
        BisectionState after;
    };

    struct BisectionResult
    {
        int n_min = 1;
        int n_max = 1;
        int slots = 0;
        BisectionState final_state;
        std::vector<BisectionStep> trajectory;
    };

    using VerdictSource = std::function<CaseVerdict(const BoundaryQuery &)>;

    // One measurement per iteration until both boundaries are resolved
    BisectionResult run_three_phase(Orientation dimension, int n_lines, const VerdictSource &verdicts);

    BisectionResult run_three_phase(Orientation dimension, const OverTheAirProber &prober, NoiseSource &rng);
}

#endif // IRSDIAG_BISECT_HPP
