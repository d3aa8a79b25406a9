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

#include "irsdiag/bisect.hpp"

#include <cmath>

namespace irsdiag
{
    const char *to_string(BisectionPhase p)
    {
        switch (p)
        {
        case BisectionPhase::I:
            return "I";
        case BisectionPhase::II:
            return "II";
        case BisectionPhase::III:
            return "III";
        case BisectionPhase::Done:
            return "done";
        }
        return "?";
    }

    BisectionState BisectionState::initial(int n_lines)
    {
        if (n_lines < 1)
            throw parameter_error("bisection: at least one line required");
        BisectionState s{1, n_lines, 1, n_lines, BisectionPhase::I, 0, 0};
        if (n_lines == 1)
            s.phase = BisectionPhase::Done;
        return s;
    }

    double BisectionState::next_cut() const
    {
        int lb = lb_min, ub = ub_min;
        if (phase == BisectionPhase::III)
        {
            lb = lb_max;
            ub = ub_max;
        }
        else if (phase == BisectionPhase::Done)
            throw parameter_error("bisection: no cut after termination");
        const double md = (lb + ub) / 2.0;
        return std::floor(md) == md ? md + 0.5 : md;
    }

    namespace
    {
        bool passed(const CaseVerdict &v, CaseLabel c)
        {
            const HypothesisTest *t = v.test(c);
            return t && t->accepted;
        }

        // Enter Phase II, skipping phases whose interval is already a single line
        void settle(BisectionState &s)
        {
            if (s.phase == BisectionPhase::II && s.lb_min == s.ub_min)
                s.phase = BisectionPhase::III;
            if (s.phase == BisectionPhase::III && s.lb_max == s.ub_max)
                s.phase = BisectionPhase::Done;
        }
    }

    BisectionState bisection_step(const BisectionState &state, const CaseVerdict &verdict)
    {
        if (state.phase == BisectionPhase::Done)
            throw parameter_error("bisection_step: search already terminated");

        BisectionState s = state;
        const double md = s.next_cut();
        const int lo = static_cast<int>(std::floor(md));
        const int hi = static_cast<int>(std::ceil(md));
        ++s.slots_used;

        CaseLabel label = verdict.label;
        if (label == CaseLabel::A || label == CaseLabel::B)
            throw parameter_error("bisection_step: region verdict given where a boundary verdict is required");
        if (s.phase == BisectionPhase::II && label == CaseLabel::One)
        {
            label = passed(verdict, CaseLabel::Two) ? CaseLabel::Two : CaseLabel::Three;
            ++s.coercions;
        }
        else if (s.phase == BisectionPhase::III && label == CaseLabel::Two)
        {
            label = passed(verdict, CaseLabel::One) ? CaseLabel::One : CaseLabel::Three;
            ++s.coercions;
        }

        switch (s.phase)
        {
        case BisectionPhase::I:
            if (label == CaseLabel::One)
            {
                s.ub_min = s.ub_max = lo;
                if (s.lb_min == s.ub_min)
                    s.phase = BisectionPhase::Done;
            }
            else if (label == CaseLabel::Two)
            {
                s.lb_min = s.lb_max = hi;
                if (s.lb_min == s.ub_min)
                    s.phase = BisectionPhase::Done;
            }
            else
            {
                s.ub_min = lo;
                s.lb_max = hi;
                s.phase = BisectionPhase::II;
                settle(s);
            }
            break;
        case BisectionPhase::II:
            if (label == CaseLabel::Two)
                s.lb_min = hi;
            else
                s.ub_min = lo;
            settle(s);
            break;
        case BisectionPhase::III:
            if (label == CaseLabel::One)
                s.ub_max = lo;
            else
                s.lb_max = hi;
            settle(s);
            break;
        case BisectionPhase::Done:
            break;
        }
        return s;
    }

    BisectionResult run_three_phase(Orientation dimension, int n_lines, const VerdictSource &verdicts)
    {
        BisectionResult res;
        BisectionState s = BisectionState::initial(n_lines);
        while (s.phase != BisectionPhase::Done)
        {
            const BoundaryQuery bq{dimension, s.next_cut()};
            const CaseVerdict v = verdicts(bq);
            s = bisection_step(s, v);
            res.trajectory.push_back({bq.cut, v.label, s});
        }
        res.n_min = s.lb_min;
        res.n_max = s.lb_max;
        res.slots = s.slots_used;
        res.final_state = s;
        return res;
    }

    BisectionResult run_three_phase(Orientation dimension, const OverTheAirProber &prober, NoiseSource &rng)
    {
        return run_three_phase(dimension, prober.dims().lines(dimension),
                               [&](const BoundaryQuery &bq) { return prober.probe_boundary(bq, rng); });
    }
}
