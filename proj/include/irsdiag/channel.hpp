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

#ifndef IRSDIAG_CHANNEL_HPP
#define IRSDIAG_CHANNEL_HPP

#include "irsdiag/core_model.hpp"

#include <array>
#include <cmath>
#include <span>

namespace irsdiag
{
    class degenerate_geometry_error : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    using Vec3 = std::array<double, 3>;

    double distance(const Vec3 &a, const Vec3 &b);

    inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

    // Positions in meters
    struct Geometry
    {
        Vec3 tx_pos{};
        std::vector<Vec3> rx_antenna_pos; // M entries
        std::vector<Vec3> irs_element_pos; // row-major over the grid
        double wavelength = 0.1;

        std::size_t antennas() const { return rx_antenna_pos.size(); }
    };

    // Placement knobs for the default chamber layout
    struct LayoutParams
    {
        double wavelength = 0.1;
        Vec3 tx_pos{1.5, -1.0, 0.0};
        Vec3 rx_center{1.5, 1.0, 0.0};
    };

    // Surface in the y-z plane centered at the origin with half-wavelength pitch
    // (columns along y, rows along z); receive antennas form a half-wavelength
    // linear array along y centered at rx_center.
    Geometry default_geometry(const GridDims &dims, std::size_t antennas, const LayoutParams &layout = {});

    struct PathLoss
    {
        double tr = 1e-3; // transmitter -> receiver
        double ir = 1e-2; // surface -> receiver
        double ti = 1e-2; // transmitter -> surface
    };

    // Radio environment: direct channel h, cascaded channels g = u * r, noise power.
    // Line sums of g (per column, per row) are precomputed for the detectors.
    class ChannelSet
    {
    public:
        // g_flat is element-major: g_flat[offset * M + m]
        ChannelSet(GridDims dims, CVec h, CVec g_flat, double noise_power);

        const GridDims &dims() const { return dims_; }
        std::size_t antennas() const { return h_.size(); }
        const CVec &h() const { return h_; }
        std::span<const cdouble> g(std::size_t offset) const { return {g_.data() + offset * h_.size(), h_.size()}; }
        std::span<const cdouble> g(Element e) const { return g(dims_.offset(e)); }
        double noise_power() const { return noise_power_; }

        // Sum of g over all elements on one column (horizontal) or row (vertical)
        std::span<const cdouble> line_sum(Orientation o, int line) const;
        // Sum of line_sum over a set of lines
        CVec lines_sum(Orientation o, const std::vector<int> &lines) const;
        const CVec &total() const { return total_; }

        // Sum over elements of ||g_n||, used as an amplitude scale for numerical floors
        double gain_scale() const { return gain_scale_; }

        ChannelSet with_noise_power(double noise_power) const;

    private:
        GridDims dims_;
        CVec h_;
        CVec g_;
        double noise_power_;
        CVec col_sums_;
        CVec row_sums_;
        CVec total_;
        double gain_scale_ = 0.0;
    };

    // Near-field LOS factors kept alongside the product for inspection
    struct CascadeFactors
    {
        CVec u; // per element
        CVec r; // element-major, M per element
    };

    CascadeFactors cascade_factors(const Geometry &geom, const PathLoss &loss);

    ChannelSet synthesize_channels(const GridDims &dims, const Geometry &geom, const PathLoss &loss, double noise_power);
}

#endif // IRSDIAG_CHANNEL_HPP
