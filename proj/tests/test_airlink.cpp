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

#include "catch_amalgamated.hpp"

#include "irsdiag/airlink.hpp"

#include <random>

using namespace irsdiag;

namespace
{
    FailureScene random_scene(const GridDims &dims, std::mt19937_64 &rng)
    {
        std::uniform_int_distribution<int> ch(1, dims.n_h()), cv(1, dims.n_v());
        int a = ch(rng), b = ch(rng), c = cv(rng), d = cv(rng);
        const DefectRect r{std::min(a, b), std::max(a, b), std::min(c, d), std::max(c, d)};
        std::uniform_real_distribution<double> ph(0.0, 2 * pi);
        std::vector<double> beta(static_cast<std::size_t>((r.h_max - r.h_min + 1) * (r.v_max - r.v_min + 1)));
        for (auto &x : beta)
            x = ph(rng);
        return FailureScene(dims, r, beta);
    }

    // y = (h + sum_n c_n g_n) x, element by element
    CVec oracle_signal(const FailureScene &scene, const PhaseAssignment &assign, const ChannelSet &ch, cdouble x)
    {
        CVec y(ch.antennas());
        for (std::size_t m = 0; m < y.size(); ++m)
        {
            cdouble acc = ch.h()[m];
            for (std::size_t n = 0; n < scene.dims().size(); ++n)
            {
                const Element e = scene.dims().element_at(n);
                const double phase = scene.is_defective(e) ? scene.stuck_phase(e) : assign[n];
                acc += std::exp(cdouble(0, phase)) * ch.g(n)[m];
            }
            y[m] = acc * x;
        }
        return y;
    }
}

TEST_CASE("noiseless received signal matches elementwise sum", "[airlink]")
{
    std::mt19937_64 rng(3);
    const GridDims dims(8, 8);
    const ChannelSet ch = synthesize_channels(dims, default_geometry(dims, 4), PathLoss{}, 0.0);
    std::uniform_real_distribution<double> ph(0.0, 2 * pi);
    for (int t = 0; t < 20; ++t)
    {
        const FailureScene scene = random_scene(dims, rng);
        std::vector<double> phases(dims.size());
        for (auto &p : phases)
            p = ph(rng);
        const PhaseAssignment assign(dims, phases);
        const cdouble x = std::polar(0.3, 0.7);
        NoiseSource noise(1);
        const Measurement meas = received_signal(scene, assign, ch, x, noise);
        const CVec want = oracle_signal(scene, assign, ch, x);
        for (std::size_t m = 0; m < want.size(); ++m)
            CHECK(std::abs(meas.y[m] - want[m]) <= 1e-12 * std::abs(want[m]) + 1e-18);
    }
}

TEST_CASE("complex Gaussian noise splits variance evenly", "[airlink]")
{
    NoiseSource src(42);
    const int n = 200000;
    double re2 = 0, im2 = 0, cross = 0;
    for (int i = 0; i < n; ++i)
    {
        const cdouble z = src.complex_gaussian(2.0);
        re2 += z.real() * z.real();
        im2 += z.imag() * z.imag();
        cross += z.real() * z.imag();
    }
    CHECK(re2 / n == Catch::Approx(1.0).epsilon(0.02));
    CHECK(im2 / n == Catch::Approx(1.0).epsilon(0.02));
    CHECK(std::abs(cross / n) < 0.02);
    CHECK(src.complex_gaussian(0.0) == cdouble{});
}

TEST_CASE("noise draws are reproducible from the seed", "[airlink]")
{
    const GridDims dims(4, 4);
    const FailureScene scene = FailureScene::uniform(dims, {1, 2, 1, 2}, 1.0);
    const ChannelSet ch = synthesize_channels(dims, default_geometry(dims, 2), PathLoss{}, 1e-9);
    NoiseSource a(9), b(9), c(10);
    const PhaseAssignment assign(dims, 0.0);
    const CVec ya = received_signal(scene, assign, ch, 1.0, a).y;
    CHECK(ya == received_signal(scene, assign, ch, 1.0, b).y);
    CHECK(ya != received_signal(scene, assign, ch, 1.0, c).y);
}

TEST_CASE("ML aggregates are exact without noise", "[airlink]")
{
    std::mt19937_64 rng(5);
    const GridDims dims(16, 8);
    const ChannelSet ch = synthesize_channels(dims, default_geometry(dims, 3), PathLoss{}, 0.0);
    for (int t = 0; t < 50; ++t)
    {
        const FailureScene scene = random_scene(dims, rng);
        CVec g_e(3), g_w(3);
        for (std::size_t n = 0; n < dims.size(); ++n)
        {
            const Element e = dims.element_at(n);
            for (std::size_t m = 0; m < 3; ++m)
            {
                if (scene.is_defective(e))
                    g_e[m] += std::exp(cdouble(0, scene.stuck_phase(e))) * ch.g(n)[m];
                else
                    g_w[m] += ch.g(n)[m];
            }
        }
        NoiseSource noise(t);
        const auto est = run_initialization(scene, ch, {cdouble(0.5, 0.1), cdouble(0.2, -0.4)}, {0.3, 2.0}, noise);
        double de = 0, dw = 0, ne = 0, nw = 0;
        for (std::size_t m = 0; m < 3; ++m)
        {
            de += std::norm(est.g_e_hat[m] - g_e[m]);
            dw += std::norm(est.g_w_hat[m] - g_w[m]);
            ne += std::norm(g_e[m]);
            nw += std::norm(g_w[m]);
        }
        CHECK(std::sqrt(de / ne) <= 1e-9);
        CHECK(std::sqrt(dw / nw) <= 1e-9);
    }
}

TEST_CASE("ML estimator input validation", "[airlink]")
{
    const CVec y(2), h(2);
    CHECK_THROWS_AS(ml_aggregate_estimates(y, y, h, {0.0, 1.0}, {0.0, pi}), parameter_error);
    CHECK_THROWS_AS(ml_aggregate_estimates(y, y, h, {1.0, 1.0}, {1.0, 1.0}), parameter_error);
    CHECK_THROWS_AS(ml_aggregate_estimates(y, y, h, {1.0, 1.0}, {0.0, 2 * pi}), parameter_error);
    CHECK_THROWS_AS(ml_aggregate_estimates(CVec(3), y, h, {1.0, 1.0}, {0.0, pi}), parameter_error);
}

TEST_CASE("stuck phases equal to the command reproduce the healthy signal", "[airlink]")
{
    const GridDims dims(4, 4);
    const ChannelSet ch = synthesize_channels(dims, default_geometry(dims, 2), PathLoss{}, 0.0);
    const double phi = 1.1;
    const cdouble x(0.5, 0.0);
    CVec want(2);
    for (std::size_t m = 0; m < 2; ++m)
        want[m] = (ch.h()[m] + std::polar(1.0, phi) * ch.total()[m]) * x;
    const PhaseAssignment assign(dims, phi);
    // a one-element defect stuck at the commanded phase, and the whole grid stuck there
    const CVec a = noiseless_signal(FailureScene::uniform(dims, {1, 1, 1, 1}, phi), assign, ch, x);
    const CVec b = noiseless_signal(FailureScene::uniform(dims, {1, 4, 1, 4}, phi), assign, ch, x);
    for (std::size_t m = 0; m < 2; ++m)
    {
        CHECK(std::abs(a[m] - want[m]) < 1e-15);
        CHECK(std::abs(b[m] - want[m]) < 1e-15);
    }
}

TEST_CASE("aggregate estimates of a defect-free grid", "[airlink]")
{
    // the slot model with E empty: y = (h + e^{j phi} sum g) x
    const GridDims dims(4, 4);
    const ChannelSet ch = synthesize_channels(dims, default_geometry(dims, 2), PathLoss{}, 0.0);
    CVec y_minus(2), y_plus(2);
    for (std::size_t m = 0; m < 2; ++m)
    {
        y_minus[m] = ch.h()[m] + ch.total()[m];
        y_plus[m] = ch.h()[m] - ch.total()[m];
    }
    const InitEstimates est = ml_aggregate_estimates(y_minus, y_plus, ch.h(), {1.0, 1.0}, {0.0, pi});
    for (std::size_t m = 0; m < 2; ++m)
    {
        CHECK(std::abs(est.g_e_hat[m]) < 1e-15);
        CHECK(std::abs(est.g_w_hat[m] - ch.total()[m]) < 1e-15);
    }
    CHECK(std::abs(std::polar(1.0, pi) - std::polar(1.0, 0.0) - cdouble(-2.0, 0.0)) < 1e-15);
}
