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

// Acceptance suite: one PASS/FAIL line per primary criterion, exit status 1
// when any criterion fails.

#include "irsdiag/harness.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

using namespace irsdiag;

namespace
{
    // pinned tolerances
    constexpr double tol_example1 = 1e-12;
    constexpr double tol_example3 = 5e-5;
    constexpr double budget_example_s = 1.0;
    constexpr double budget_exhaustive_s = 60.0;
    constexpr double tol_ml = 1e-9;
    constexpr int ml_scenes = 100;
    constexpr int frr_draws = 100000;
    constexpr double frr_low = 2e-4;
    constexpr double frr_high = 5e-3;
    constexpr int trend_trials = 200;
    constexpr double gap_high_max = 0.02;
    constexpr double bisect_slot_rel_spread = 0.10;
    constexpr double budget_trends_s = 1200.0;

    using Clock = std::chrono::steady_clock;

    double seconds_since(Clock::time_point t0)
    {
        return std::chrono::duration<double>(Clock::now() - t0).count();
    }

    int failures = 0;

    void report(const char *name, bool ok, const std::string &detail)
    {
        std::printf("%s  %-34s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
        std::fflush(stdout);
        failures += ok ? 0 : 1;
    }

    std::string fmt(const char *pattern, ...) __attribute__((format(printf, 1, 2)));
    std::string fmt(const char *pattern, ...)
    {
        char buf[512];
        va_list ap;
        va_start(ap, pattern);
        std::vsnprintf(buf, sizeof buf, pattern, ap);
        va_end(ap);
        return buf;
    }

    bool close_all(const std::vector<double> &a, const std::vector<double> &b, double tol)
    {
        if (a.size() != b.size())
            return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (std::abs(a[i] - b[i]) > tol)
                return false;
        return true;
    }

    // ------------------------------------------------------------ examples

    void example1()
    {
        const auto t0 = Clock::now();
        const std::vector<int> script{0, 0, 1, 1};
        std::size_t k = 0;
        const SortPMResult r =
            run_sortpm_generic([&](const QuerySet &) { return script.at(k++); }, 2, {0.1, 0.05, 100}, true);
        const std::vector<std::vector<double>> want{{0.1, 0.9}, {0.5, 0.5}, {0.9, 0.1}, {81.0 / 82, 1.0 / 82}};
        bool ok = r.history.size() == want.size() && r.converged && r.estimate == 1;
        for (std::size_t i = 0; ok && i < want.size(); ++i)
            ok = close_all(r.history[i].posterior, want[i], tol_example1);
        const double s = seconds_since(t0);
        report("example-1 regression", ok && s < budget_example_s, fmt("rounds=%d estimate=%d %.3gs", r.rounds, r.estimate, s));
    }

    void example3()
    {
        const auto t0 = Clock::now();
        const std::vector<int> script{0, 0, 0, 1, 0, 1};
        std::size_t k = 0;
        const BoundaryEstimate r = estimate_boundary_sortpm(
            BoundaryTarget::HMin, 4, [&](const RegionQuery &, Side) { return Answer{script.at(k++), 1}; },
            {0.1, 0.1, 100}, true);
        // printed to four decimals
        const std::vector<std::vector<double>> want{
            {0.05, 0.05, 0.45, 0.45}, {0.0833, 0.0833, 0.0833, 0.75}, {0.25, 0.25, 0.25, 0.25},
            {0.45, 0.45, 0.05, 0.05}, {0.0833, 0.75, 0.0833, 0.0833}, {0.0119, 0.9643, 0.0119, 0.0119},
        };
        bool ok = r.search.history.size() == want.size() && r.index == 2 && r.search.rounds == 6;
        for (std::size_t i = 0; ok && i < want.size(); ++i)
            ok = close_all(r.search.history[i].posterior, want[i], tol_example3);
        const double s = seconds_since(t0);
        report("example-3 regression", ok && s < budget_example_s,
               fmt("rounds=%d estimate=%d %.3gs", r.search.rounds, r.index, s));
    }

    void example2()
    {
        const auto t0 = Clock::now();
        const GridDims dims(4, 4);
        const FailureScene scene(dims, {2, 3, 2, 3}, {0.7, 2.1, 4.0, 5.5});
        const ChannelSet ch = synthesize_channels(dims, default_geometry(dims, 4), PathLoss{}, 0.0);
        NoiseSource rng(1);
        const InitEstimates init = run_initialization(scene, ch, {1.0, 1.0}, {0.0, pi}, rng);
        const OverTheAirProber prober(scene, ch, init, 1.0);
        const BisectionResult r = run_three_phase(Orientation::horizontal, prober, rng);

        const std::vector<double> cuts{2.5, 1.5, 3.5};
        const std::vector<CaseLabel> cases{CaseLabel::Three, CaseLabel::Two, CaseLabel::One};
        const std::vector<std::array<int, 4>> bounds{{1, 2, 3, 4}, {2, 2, 3, 4}, {2, 2, 3, 3}};
        bool ok = r.slots == 3 && r.n_min == 2 && r.n_max == 3 && r.trajectory.size() == 3;
        for (std::size_t i = 0; ok && i < 3; ++i)
        {
            const auto &st = r.trajectory[i];
            ok = st.cut == cuts[i] && st.verdict == cases[i] &&
                 std::array<int, 4>{st.after.lb_min, st.after.ub_min, st.after.lb_max, st.after.ub_max} == bounds[i];
        }
        const double s = seconds_since(t0);
        report("example-2 regression", ok && s < budget_example_s,
               fmt("(%d,%d) in %d slots %.3gs", r.n_min, r.n_max, r.slots, s));
    }

    // ------------------------------------------------------------ zero-noise sweep

    void zero_noise_exhaustive()
    {
        const auto t0 = Clock::now();
        int cases = 0, exact_sortpm = 0, exact_bisect = 0, within_budget = 0;
        std::mt19937_64 beta_rng(2024);
        std::uniform_real_distribution<double> beta(0.0, 2 * pi);
        for (int n : {4, 8})
        {
            ExperimentConfig cfg;
            cfg.n_h = cfg.n_v = n;
            cfg.defect_h = cfg.defect_v = 1;
            cfg.zero_noise = true;
            const GridDims dims(n, n);
            const int budget = 2 * static_cast<int>(std::log2(n));
            for (int h0 = 1; h0 <= n; ++h0)
                for (int h1 = h0; h1 <= n; ++h1)
                    for (int v0 = 1; v0 <= n; ++v0)
                        for (int v1 = v0; v1 <= n; ++v1)
                        {
                            std::vector<double> phases(static_cast<std::size_t>((h1 - h0 + 1) * (v1 - v0 + 1)));
                            for (auto &p : phases)
                                p = beta(beta_rng);
                            const FailureScene scene(dims, {h0, h1, v0, v1}, phases);
                            const auto res = diagnose_scene(cfg, {0.0, 4}, scene, static_cast<std::uint64_t>(cases));
                            ++cases;
                            exact_sortpm += res[0].correct;
                            exact_bisect += res[1].correct;
                            const bool in_budget = res[1].slots_h <= budget && res[1].slots_v <= budget;
                            within_budget += in_budget;
                            if (!in_budget)
                                std::printf("      slot bound exceeded on %s\n", to_string(scene.defect()).c_str());
                        }
        }
        const double s = seconds_since(t0);
        const bool ok = exact_sortpm == cases && exact_bisect == cases && within_budget == cases &&
                        s < budget_exhaustive_s;
        report("zero-noise oracle equivalence", ok,
               fmt("%d rectangles: sortpm %d, bisect %d exact, %d within slot bound, %.3gs", cases, exact_sortpm,
                   exact_bisect, within_budget, s));
    }

    // ------------------------------------------------------------ estimator and threshold

    void ml_exactness()
    {
        ExperimentConfig cfg;
        const GridDims dims = cfg.dims();
        const ChannelSet ch = synthesize_channels(dims, default_geometry(dims, 4), PathLoss{}, 0.0);
        double worst_e = 0.0, worst_w = 0.0;
        for (int t = 0; t < ml_scenes; ++t)
        {
            const FailureScene scene = sample_scene(cfg, mix_seed(99, static_cast<std::uint64_t>(t)));
            CVec g_e(4), g_w(4);
            for (std::size_t n = 0; n < dims.size(); ++n)
            {
                const Element e = dims.element_at(n);
                for (std::size_t m = 0; m < 4; ++m)
                {
                    if (scene.is_defective(e))
                        g_e[m] += std::polar(1.0, scene.stuck_phase(e)) * ch.g(n)[m];
                    else
                        g_w[m] += ch.g(n)[m];
                }
            }
            NoiseSource rng(1);
            const cdouble x = std::sqrt(dbm_to_watts(10.0));
            const InitEstimates est = run_initialization(scene, ch, {x, x}, {0.0, pi}, rng);
            double de = 0, dw = 0, ne = 0, nw = 0;
            for (std::size_t m = 0; m < 4; ++m)
            {
                de += std::norm(est.g_e_hat[m] - g_e[m]);
                dw += std::norm(est.g_w_hat[m] - g_w[m]);
                ne += std::norm(g_e[m]);
                nw += std::norm(g_w[m]);
            }
            worst_e = std::max(worst_e, std::sqrt(de / ne));
            worst_w = std::max(worst_w, std::sqrt(dw / nw));
        }
        report("ML estimator exactness", worst_e <= tol_ml && worst_w <= tol_ml,
               fmt("worst relative error g_e %.2e, g_w %.2e over %d scenes", worst_e, worst_w, ml_scenes));
    }

    // End-to-end draws under the true hypothesis: fresh noisy initialization and
    // probe each time, cycling region (Case A), Case 1 and Case 2 boundary tests.
    void threshold_calibration()
    {
        ExperimentConfig cfg;
        const GridDims dims = cfg.dims();
        const ChannelSet ch = synthesize_channels(dims, default_geometry(dims, 4), PathLoss{}, cfg.noise_power());
        const cdouble x = std::sqrt(dbm_to_watts(10.0));
        const DetectorConfig det;
        NoiseSource rng(12345);
        std::mt19937_64 pick(6789);
        int rejects = 0, draws = 0;
        int rejects_kind[3] = {0, 0, 0};
        while (draws < frr_draws)
        {
            const FailureScene scene = sample_scene(cfg, pick());
            const DefectRect r = scene.defect();
            for (int rep = 0; rep < 100 && draws < frr_draws; ++rep, ++draws)
            {
                const InitEstimates init = run_initialization(scene, ch, {x, x}, {0.0, pi}, rng);
                const int kind = draws % 3;
                bool rejected = false;
                if (kind == 0)
                {
                    // a defect-free column block, left or right of the defect
                    RegionQuery q{Orientation::horizontal, {}};
                    if (r.h_min > 1)
                        for (int l = 1; l < r.h_min; ++l)
                            q.lines.push_back(l);
                    else
                        for (int l = r.h_max + 1; l <= dims.n_h(); ++l)
                            q.lines.push_back(l);
                    const auto assign = PhaseAssignment::split_lines(dims, q.orientation, q.lines, det.phase_in, det.phase_out);
                    const Measurement meas = received_signal(scene, assign, ch, x, rng);
                    rejected = !classify_region(meas, init, q, ch, det).test(CaseLabel::A)->accepted;
                }
                else
                {
                    // a cut with every defect on one side; Case 1 or Case 2 is true
                    const bool case1 = kind == 1 ? r.h_max < dims.n_h() : r.h_min == 1;
                    std::uniform_int_distribution<int> k(case1 ? r.h_max : 1, case1 ? dims.n_h() - 1 : r.h_min - 1);
                    const BoundaryQuery bq{Orientation::horizontal, k(pick) + 0.5};
                    std::vector<int> left;
                    for (int l = 1; l <= bq.last_left(); ++l)
                        left.push_back(l);
                    const auto assign = PhaseAssignment::split_lines(dims, bq.orientation, left, det.phase_in, det.phase_out);
                    const Measurement meas = received_signal(scene, assign, ch, x, rng);
                    const CaseVerdict v = classify_boundary(meas, init, bq, ch, det);
                    rejected = !v.test(case1 ? CaseLabel::One : CaseLabel::Two)->accepted;
                }
                rejects += rejected;
                rejects_kind[kind] += rejected;
            }
        }
        const double rate = static_cast<double>(rejects) / draws;
        report("threshold calibration", rate >= frr_low && rate <= frr_high,
               fmt("false-reject rate %.2e over %d draws (region %d, case1 %d, case2 %d), alpha %.0e", rate, draws,
                   rejects_kind[0], rejects_kind[1], rejects_kind[2], det.alpha));
    }

    // ------------------------------------------------------------ sweep trends

    // Spearman rank correlation with average ranks for ties
    double spearman(const std::vector<double> &x, const std::vector<double> &y)
    {
        const auto ranks = [](const std::vector<double> &v) {
            std::vector<double> r(v.size());
            for (std::size_t i = 0; i < v.size(); ++i)
            {
                double less = 0, equal = 0;
                for (double w : v)
                {
                    less += w < v[i];
                    equal += w == v[i];
                }
                r[i] = less + (equal + 1) / 2.0;
            }
            return r;
        };
        const auto rx = ranks(x), ry = ranks(y);
        const double n = static_cast<double>(x.size());
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            mx += rx[i] / n;
            my += ry[i] / n;
        }
        double sxy = 0, sxx = 0, syy = 0;
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            sxy += (rx[i] - mx) * (ry[i] - my);
            sxx += (rx[i] - mx) * (rx[i] - mx);
            syy += (ry[i] - my) * (ry[i] - my);
        }
        if (sxx == 0 || syy == 0)
            return 0.0; // a constant series carries no trend
        return sxy / std::sqrt(sxx * syy);
    }

    struct Series
    {
        std::vector<double> x, acc_s, acc_b, slots_s, slots_b;
    };

    Series collect(const SweepResult &res, bool by_antennas)
    {
        Series s;
        for (const Aggregate &a : res.aggregates)
        {
            const double key = by_antennas ? a.point.antennas : a.point.p_t_dbm;
            if (a.method == Method::SortPM)
            {
                s.x.push_back(key);
                s.acc_s.push_back(a.accuracy);
                s.slots_s.push_back(a.mean_slots);
            }
            else
            {
                s.acc_b.push_back(a.accuracy);
                s.slots_b.push_back(a.mean_slots);
            }
        }
        return s;
    }

    std::string join(const std::vector<double> &v, const char *pattern)
    {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i)
            out += (i ? " " : "") + fmt(pattern, v[i]);
        return out;
    }

    void sweep_trends()
    {
        const auto t0 = Clock::now();
        ExperimentConfig cfg;
        cfg.trials = trend_trials;
        const Series p = collect(sweep(cfg), false);

        ExperimentConfig cfg_m = cfg;
        cfg_m.power_dbm = {16.0};
        cfg_m.antennas = {1, 2, 4, 8};
        const Series m = collect(sweep(cfg_m), true);
        const double s = seconds_since(t0);

        std::printf("      P_t dBm          %s\n", join(p.x, "%7g").c_str());
        std::printf("      accuracy sortpm  %s\n", join(p.acc_s, "%7.3f").c_str());
        std::printf("      accuracy bisect  %s\n", join(p.acc_b, "%7.3f").c_str());
        std::printf("      slots sortpm     %s\n", join(p.slots_s, "%7.2f").c_str());
        std::printf("      slots bisect     %s\n", join(p.slots_b, "%7.2f").c_str());
        std::printf("      M                %s\n", join(m.x, "%7g").c_str());
        std::printf("      accuracy sortpm  %s\n", join(m.acc_s, "%7.3f").c_str());
        std::printf("      accuracy bisect  %s\n", join(m.acc_b, "%7.3f").c_str());

        const double rho_s = spearman(p.x, p.acc_s), rho_b = spearman(p.x, p.acc_b);
        const bool a = rho_s >= 0 && rho_b >= 0;

        const double gap_low = p.acc_s.front() - p.acc_b.front();
        const double gap_high = std::abs(p.acc_s.back() - p.acc_b.back());
        const bool b = gap_low >= 0 && gap_high < gap_high_max;

        const auto [bmin, bmax] = std::minmax_element(p.slots_b.begin(), p.slots_b.end());
        double bmean = 0;
        for (double v : p.slots_b)
            bmean += v / static_cast<double>(p.slots_b.size());
        const double spread = (*bmax - *bmin) / bmean;
        const double rho_slots = spearman(p.x, p.slots_s);
        bool fewer = true;
        for (std::size_t i = 0; i < p.slots_b.size(); ++i)
            fewer = fewer && p.slots_b[i] < p.slots_s[i];
        const bool c = spread <= bisect_slot_rel_spread && rho_slots <= 0 && fewer;

        const double rho_ms = spearman(m.x, m.acc_s), rho_mb = spearman(m.x, m.acc_b);
        const bool d = rho_ms >= 0 && rho_mb >= 0;

        std::printf("      (a) %s spearman(P_t, acc): sortpm %.3f, bisect %.3f\n", a ? "ok  " : "FAIL", rho_s, rho_b);
        std::printf("      (b) %s gap at lowest %.3f (>= 0), at highest %.3f (< %.2f)\n", b ? "ok  " : "FAIL", gap_low,
                    gap_high, gap_high_max);
        std::printf("      (c) %s bisect slot spread %.3f of mean (<= %.2f), spearman(P_t, sortpm slots) %.3f, "
                    "bisect fewer everywhere: %s\n",
                    c ? "ok  " : "FAIL", spread, bisect_slot_rel_spread, rho_slots, fewer ? "yes" : "no");
        std::printf("      (d) %s spearman(M, acc): sortpm %.3f, bisect %.3f\n", d ? "ok  " : "FAIL", rho_ms, rho_mb);
        report("sweep-trend reproduction", a && b && c && d && s < budget_trends_s,
               fmt("(a)%s (b)%s (c)%s (d)%s, %d trials/point, %.0fs", a ? "+" : "-", b ? "+" : "-", c ? "+" : "-",
                   d ? "+" : "-", trend_trials, s));
    }

    // ------------------------------------------------------------ determinism

    std::string read_file(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    void determinism()
    {
        ExperimentConfig cfg;
        cfg.trials = 10;
        cfg.power_dbm = {0.0, 20.0};
        const std::string a = "acceptance_run_a.csv", b = "acceptance_run_b.csv";
        write_csv_file(a, sweep(cfg));
        write_csv_file(b, sweep(cfg));
        const std::string ca = read_file(a), cb = read_file(b);
        std::remove(a.c_str());
        std::remove(b.c_str());
        report("determinism", !ca.empty() && ca == cb, fmt("%zu bytes per CSV", ca.size()));
    }
}

int main()
{
    const std::vector<std::function<void()>> criteria{example1,   example2,      example3,
                                                      zero_noise_exhaustive, ml_exactness, threshold_calibration,
                                                      sweep_trends, determinism};
    for (const auto &c : criteria)
    {
        try
        {
            c();
        }
        catch (const std::exception &e)
        {
            report("criterion raised", false, e.what());
        }
    }
    std::printf("%d criteria failed\n", failures);
    return failures ? 1 : 0;
}
