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

#include "irsdiag/core_model.hpp"

#include <algorithm>
#include <cmath>

namespace irsdiag
{
    GridDims::GridDims(int n_h, int n_v) : n_h_(n_h), n_v_(n_v)
    {
        if (!is_power_of_two(n_h) || !is_power_of_two(n_v))
            throw parameter_error("GridDims: n_h and n_v must be positive powers of two, got " +
                                  std::to_string(n_h) + "x" + std::to_string(n_v));
    }

    std::size_t GridDims::offset(Element e) const
    {
        if (!contains(e))
            throw index_error("element (" + std::to_string(e.col) + "," + std::to_string(e.row) +
                              ") outside " + std::to_string(n_h_) + "x" + std::to_string(n_v_) + " grid");
        return static_cast<std::size_t>(e.row - 1) * static_cast<std::size_t>(n_h_) + static_cast<std::size_t>(e.col - 1);
    }

    Element GridDims::element_at(std::size_t offset) const
    {
        if (offset >= size())
            throw index_error("element offset " + std::to_string(offset) + " outside grid");
        return {static_cast<int>(offset % n_h_) + 1, static_cast<int>(offset / n_h_) + 1};
    }

    bool DefectRect::valid_in(const GridDims &dims) const
    {
        return 1 <= h_min && h_min <= h_max && h_max <= dims.n_h() &&
               1 <= v_min && v_min <= v_max && v_max <= dims.n_v();
    }

    std::string to_string(const DefectRect &r)
    {
        return "(" + std::to_string(r.h_min) + "," + std::to_string(r.h_max) + "," +
               std::to_string(r.v_min) + "," + std::to_string(r.v_max) + ")";
    }

    PhaseAssignment::PhaseAssignment(const GridDims &dims, double common_phase)
        : phases_(dims.size(), common_phase)
    {
        if (!std::isfinite(common_phase))
            throw parameter_error("PhaseAssignment: non-finite phase");
    }

    PhaseAssignment::PhaseAssignment(const GridDims &dims, std::vector<double> phases) : phases_(std::move(phases))
    {
        if (phases_.size() != dims.size())
            throw parameter_error("PhaseAssignment: expected " + std::to_string(dims.size()) + " phases, got " +
                                  std::to_string(phases_.size()));
        if (!std::all_of(phases_.begin(), phases_.end(), [](double p) { return std::isfinite(p); }))
            throw parameter_error("PhaseAssignment: non-finite phase");
    }

    PhaseAssignment PhaseAssignment::split_lines(const GridDims &dims, Orientation o, const std::vector<int> &lines,
                                                 double inside, double outside)
    {
        const int n_lines = dims.lines(o);
        std::vector<bool> in_set(static_cast<std::size_t>(n_lines) + 1, false);
        for (int l : lines)
        {
            if (l < 1 || l > n_lines)
                throw index_error("line index " + std::to_string(l) + " outside 1.." + std::to_string(n_lines));
            in_set[l] = true;
        }
        std::vector<double> phases(dims.size());
        for (std::size_t i = 0; i < phases.size(); ++i)
        {
            const Element e = dims.element_at(i);
            const int line = o == Orientation::horizontal ? e.col : e.row;
            phases[i] = in_set[line] ? inside : outside;
        }
        return PhaseAssignment(dims, std::move(phases));
    }

    FailureScene::FailureScene(GridDims dims, DefectRect defect)
        : dims_(dims), defect_(defect), stuck_(dims.size(), false), beta_(dims.size(), 0.0)
    {
        if (!defect_.valid_in(dims_))
            throw parameter_error("FailureScene: defect rectangle " + to_string(defect_) + " invalid for grid");
    }

    FailureScene::FailureScene(GridDims dims, DefectRect defect, std::vector<double> stuck_phases)
        : FailureScene(dims, defect)
    {
        const std::size_t count = static_cast<std::size_t>(defect.h_max - defect.h_min + 1) *
                                  static_cast<std::size_t>(defect.v_max - defect.v_min + 1);
        if (stuck_phases.size() != count)
            throw parameter_error("FailureScene: expected " + std::to_string(count) + " stuck phases, got " +
                                  std::to_string(stuck_phases.size()));
        std::size_t k = 0;
        for (int row = defect.v_min; row <= defect.v_max; ++row)
            for (int col = defect.h_min; col <= defect.h_max; ++col)
            {
                const double beta = stuck_phases[k++];
                if (!std::isfinite(beta))
                    throw parameter_error("FailureScene: non-finite stuck phase");
                const std::size_t off = dims_.offset({col, row});
                stuck_[off] = true;
                beta_[off] = beta;
            }
    }

    FailureScene FailureScene::uniform(GridDims dims, DefectRect defect, double beta)
    {
        const std::size_t count = static_cast<std::size_t>(defect.h_max - defect.h_min + 1) *
                                  static_cast<std::size_t>(defect.v_max - defect.v_min + 1);
        return FailureScene(dims, defect, std::vector<double>(count, beta));
    }

    FailureScene FailureScene::from_mask(GridDims dims, const std::vector<bool> &mask, const std::vector<double> &stuck_phase_grid)
    {
        if (stuck_phase_grid.size() != dims.size())
            throw parameter_error("FailureScene::from_mask: stuck phase grid size mismatch");
        FailureScene scene(dims, bounding_rectangle(dims, mask));
        for (std::size_t i = 0; i < mask.size(); ++i)
            if (mask[i])
            {
                scene.stuck_[i] = true;
                scene.beta_[i] = stuck_phase_grid[i];
            }
        return scene;
    }

    bool FailureScene::is_defective(Element e) const
    {
        return stuck_[dims_.offset(e)];
    }

    double FailureScene::stuck_phase(Element e) const
    {
        const std::size_t off = dims_.offset(e);
        if (!stuck_[off])
            throw index_error("element (" + std::to_string(e.col) + "," + std::to_string(e.row) + ") is not defective");
        return beta_[off];
    }

    cdouble realized_coefficient(const FailureScene &scene, const PhaseAssignment &assign, Element element)
    {
        const std::size_t off = scene.dims().offset(element);
        if (assign.size() != scene.dims().size())
            throw parameter_error("realized_coefficient: assignment does not cover the grid");
        const double phase = scene.is_defective(element) ? scene.stuck_phase(element) : assign[off];
        return std::polar(1.0, phase);
    }

    std::vector<Element> defective_set(const FailureScene &scene)
    {
        const DefectRect &r = scene.defect();
        std::vector<Element> out;
        out.reserve(static_cast<std::size_t>(r.h_max - r.h_min + 1) * static_cast<std::size_t>(r.v_max - r.v_min + 1));
        for (int col = r.h_min; col <= r.h_max; ++col)
            for (int row = r.v_min; row <= r.v_max; ++row)
                out.push_back({col, row});
        return out;
    }

    DefectRect bounding_rectangle(const GridDims &dims, const std::vector<bool> &mask)
    {
        if (mask.size() != dims.size())
            throw parameter_error("bounding_rectangle: mask size mismatch");
        std::optional<DefectRect> rect;
        for (std::size_t i = 0; i < mask.size(); ++i)
        {
            if (!mask[i])
                continue;
            const Element e = dims.element_at(i);
            if (!rect)
            {
                rect = DefectRect{e.col, e.col, e.row, e.row};
                continue;
            }
            rect->h_min = std::min(rect->h_min, e.col);
            rect->h_max = std::max(rect->h_max, e.col);
            rect->v_min = std::min(rect->v_min, e.row);
            rect->v_max = std::max(rect->v_max, e.row);
        }
        if (!rect)
            throw no_defect_error("bounding_rectangle: mask has no defective element");
        return *rect;
    }
}
