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

#ifndef IRSDIAG_CORE_MODEL_HPP
#define IRSDIAG_CORE_MODEL_HPP

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace irsdiag
{
    using cdouble = std::complex<double>;
    using CVec = std::vector<cdouble>;

    inline constexpr double pi = 3.141592653589793238462643383279502884;

    // Invalid parameter or precondition
    class parameter_error : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Element or line index outside the grid
    class index_error : public std::out_of_range
    {
    public:
        using std::out_of_range::out_of_range;
    };

    // Mask without any defective element
    class no_defect_error : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Horizontal queries act on columns (n_h), vertical queries on rows (n_v)
    enum class Orientation
    {
        horizontal,
        vertical
    };

    // Grid position, 1-based: col in 1..n_h, row in 1..n_v
    struct Element
    {
        int col = 1;
        int row = 1;
        friend bool operator==(const Element &, const Element &) = default;
        friend auto operator<=>(const Element &, const Element &) = default;
    };

    // Grid of n_h columns and n_v rows, both powers of two
    class GridDims
    {
    public:
        GridDims(int n_h, int n_v);

        int n_h() const { return n_h_; }
        int n_v() const { return n_v_; }
        std::size_t size() const { return static_cast<std::size_t>(n_h_) * static_cast<std::size_t>(n_v_); }

        // Number of lines (columns or rows) along the given orientation
        int lines(Orientation o) const { return o == Orientation::horizontal ? n_h_ : n_v_; }

        bool contains(Element e) const { return e.col >= 1 && e.col <= n_h_ && e.row >= 1 && e.row <= n_v_; }

        // Row-major storage offset; throws index_error when out of range
        std::size_t offset(Element e) const;
        Element element_at(std::size_t offset) const;

        friend bool operator==(const GridDims &, const GridDims &) = default;

    private:
        int n_h_;
        int n_v_;
    };

    // Inclusive rectangle of defective elements, 1-based
    struct DefectRect
    {
        int h_min = 1;
        int h_max = 1;
        int v_min = 1;
        int v_max = 1;

        bool valid_in(const GridDims &dims) const;
        bool contains(Element e) const
        {
            return e.col >= h_min && e.col <= h_max && e.row >= v_min && e.row <= v_max;
        }
        int min_along(Orientation o) const { return o == Orientation::horizontal ? h_min : v_min; }
        int max_along(Orientation o) const { return o == Orientation::horizontal ? h_max : v_max; }

        friend bool operator==(const DefectRect &, const DefectRect &) = default;
    };

    std::string to_string(const DefectRect &r);

    // Desired phase per element (row-major) for one time slot
    class PhaseAssignment
    {
    public:
        PhaseAssignment(const GridDims &dims, double common_phase);
        PhaseAssignment(const GridDims &dims, std::vector<double> phases);

        // Phase `inside` on the given lines, `outside` elsewhere
        static PhaseAssignment split_lines(const GridDims &dims, Orientation o, const std::vector<int> &lines,
                                           double inside, double outside);

        double operator[](std::size_t offset) const { return phases_[offset]; }
        double at(const GridDims &dims, Element e) const { return phases_[dims.offset(e)]; }
        std::size_t size() const { return phases_.size(); }

    private:
        std::vector<double> phases_;
    };

    // Ground truth for one simulated surface: the defect rectangle and stuck phases.
    // An optional free-form mask may be supplied; the diagnosis target is then its
    // bounding rectangle while only masked elements are actually stuck.
    class FailureScene
    {
    public:
        // stuck_phases: one entry per element of `defect`, row-major inside the rectangle
        FailureScene(GridDims dims, DefectRect defect, std::vector<double> stuck_phases);

        // Common stuck phase for every defective element
        static FailureScene uniform(GridDims dims, DefectRect defect, double beta);

        // Non-rectangular cluster; mask is row-major over the grid
        static FailureScene from_mask(GridDims dims, const std::vector<bool> &mask, const std::vector<double> &stuck_phase_grid);

        const GridDims &dims() const { return dims_; }
        const DefectRect &defect() const { return defect_; }

        bool is_defective(Element e) const;
        // Stuck phase of a defective element; throws index_error for normal elements
        double stuck_phase(Element e) const;

    private:
        FailureScene(GridDims dims, DefectRect defect);

        GridDims dims_;
        DefectRect defect_;
        std::vector<bool> stuck_;    // row-major over the grid
        std::vector<double> beta_;   // row-major over the grid, meaningful where stuck_
    };

    // Actual reflecting coefficient: e^{j beta} when stuck, e^{j phi} otherwise
    cdouble realized_coefficient(const FailureScene &scene, const PhaseAssignment &assign, Element element);

    // Elements inside the defect rectangle, ordered by (col, row)
    std::vector<Element> defective_set(const FailureScene &scene);

    // Smallest rectangle covering every true entry of a row-major mask
    DefectRect bounding_rectangle(const GridDims &dims, const std::vector<bool> &mask);

    inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}

#endif // IRSDIAG_CORE_MODEL_HPP
