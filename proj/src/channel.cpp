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

#include "irsdiag/channel.hpp"

#include <cmath>

namespace irsdiag
{
    double distance(const Vec3 &a, const Vec3 &b)
    {
        const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
        return std::sqrt(dx * dx + dy * dy + dz * dz);
    }

    Geometry default_geometry(const GridDims &dims, std::size_t antennas, const LayoutParams &layout)
    {
        if (antennas == 0)
            throw parameter_error("default_geometry: at least one receive antenna required");
        if (!(layout.wavelength > 0.0))
            throw parameter_error("default_geometry: wavelength must be positive");

        const double pitch = layout.wavelength / 2.0;
        Geometry geom;
        geom.wavelength = layout.wavelength;
        geom.tx_pos = layout.tx_pos;

        const double mid_m = (static_cast<double>(antennas) + 1.0) / 2.0;
        for (std::size_t m = 1; m <= antennas; ++m)
        {
            Vec3 p = layout.rx_center;
            p[1] += (static_cast<double>(m) - mid_m) * pitch;
            geom.rx_antenna_pos.push_back(p);
        }

        const double mid_h = (dims.n_h() + 1) / 2.0;
        const double mid_v = (dims.n_v() + 1) / 2.0;
        geom.irs_element_pos.resize(dims.size());
        for (std::size_t i = 0; i < dims.size(); ++i)
        {
            const Element e = dims.element_at(i);
            geom.irs_element_pos[i] = {0.0, (e.col - mid_h) * pitch, (e.row - mid_v) * pitch};
        }
        return geom;
    }

    namespace
    {
        // Propagation phasor e^{-j 2 pi d / lambda}
        cdouble los_phasor(const Vec3 &a, const Vec3 &b, double wavelength)
        {
            const double d = distance(a, b);
            if (!(d > 0.0))
                throw degenerate_geometry_error("coincident points in geometry");
            return std::polar(1.0, -2.0 * pi * d / wavelength);
        }

        void validate(const Geometry &geom)
        {
            if (geom.rx_antenna_pos.empty())
                throw parameter_error("geometry: at least one receive antenna required");
            if (!(geom.wavelength > 0.0) || !std::isfinite(geom.wavelength))
                throw parameter_error("geometry: wavelength must be positive");
        }
    }

    CascadeFactors cascade_factors(const Geometry &geom, const PathLoss &loss)
    {
        validate(geom);
        const std::size_t M = geom.antennas();
        CascadeFactors f;
        f.u.resize(geom.irs_element_pos.size());
        f.r.resize(geom.irs_element_pos.size() * M);
        for (std::size_t n = 0; n < geom.irs_element_pos.size(); ++n)
        {
            const Vec3 &s = geom.irs_element_pos[n];
            f.u[n] = loss.ti * los_phasor(geom.tx_pos, s, geom.wavelength);
            for (std::size_t m = 0; m < M; ++m)
                f.r[n * M + m] = loss.ir * los_phasor(s, geom.rx_antenna_pos[m], geom.wavelength);
        }
        return f;
    }

    ChannelSet synthesize_channels(const GridDims &dims, const Geometry &geom, const PathLoss &loss, double noise_power)
    {
        validate(geom);
        if (geom.irs_element_pos.size() != dims.size())
            throw parameter_error("synthesize_channels: element positions do not match grid");
        if (!(loss.tr > 0.0 && loss.ir > 0.0 && loss.ti > 0.0))
            throw parameter_error("synthesize_channels: path losses must be positive");

        const std::size_t M = geom.antennas();
        CVec h(M);
        for (std::size_t m = 0; m < M; ++m)
            h[m] = loss.tr * los_phasor(geom.tx_pos, geom.rx_antenna_pos[m], geom.wavelength);

        const CascadeFactors f = cascade_factors(geom, loss);
        CVec g(f.r.size());
        for (std::size_t n = 0; n < f.u.size(); ++n)
            for (std::size_t m = 0; m < M; ++m)
                g[n * M + m] = f.u[n] * f.r[n * M + m];

        return ChannelSet(dims, std::move(h), std::move(g), noise_power);
    }

    ChannelSet::ChannelSet(GridDims dims, CVec h, CVec g_flat, double noise_power)
        : dims_(dims), h_(std::move(h)), g_(std::move(g_flat)), noise_power_(noise_power)
    {
        const std::size_t M = h_.size();
        if (M == 0)
            throw parameter_error("ChannelSet: at least one receive antenna required");
        if (g_.size() != dims_.size() * M)
            throw parameter_error("ChannelSet: cascaded channel size mismatch");
        // zero noise is accepted for noiseless simulation
        if (!(noise_power_ >= 0.0) || !std::isfinite(noise_power_))
            throw parameter_error("ChannelSet: noise power must be finite and non-negative");

        col_sums_.assign(static_cast<std::size_t>(dims_.n_h()) * M, cdouble{});
        row_sums_.assign(static_cast<std::size_t>(dims_.n_v()) * M, cdouble{});
        total_.assign(M, cdouble{});
        for (std::size_t n = 0; n < dims_.size(); ++n)
        {
            const Element e = dims_.element_at(n);
            double norm2 = 0.0;
            for (std::size_t m = 0; m < M; ++m)
            {
                const cdouble v = g_[n * M + m];
                col_sums_[static_cast<std::size_t>(e.col - 1) * M + m] += v;
                row_sums_[static_cast<std::size_t>(e.row - 1) * M + m] += v;
                total_[m] += v;
                norm2 += std::norm(v);
            }
            gain_scale_ += std::sqrt(norm2);
        }
    }

    std::span<const cdouble> ChannelSet::line_sum(Orientation o, int line) const
    {
        const int n_lines = dims_.lines(o);
        if (line < 1 || line > n_lines)
            throw index_error("line " + std::to_string(line) + " outside 1.." + std::to_string(n_lines));
        const CVec &sums = o == Orientation::horizontal ? col_sums_ : row_sums_;
        return {sums.data() + static_cast<std::size_t>(line - 1) * h_.size(), h_.size()};
    }

    CVec ChannelSet::lines_sum(Orientation o, const std::vector<int> &lines) const
    {
        CVec out(h_.size(), cdouble{});
        for (int l : lines)
        {
            const auto s = line_sum(o, l);
            for (std::size_t m = 0; m < out.size(); ++m)
                out[m] += s[m];
        }
        return out;
    }

    ChannelSet ChannelSet::with_noise_power(double noise_power) const
    {
        ChannelSet copy = *this;
        if (!(noise_power >= 0.0) || !std::isfinite(noise_power))
            throw parameter_error("ChannelSet: noise power must be finite and non-negative");
        copy.noise_power_ = noise_power;
        return copy;
    }
}
