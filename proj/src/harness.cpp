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

#include "irsdiag/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace irsdiag
{
    using json = nlohmann::json;

    const char *to_string(Method m)
    {
        return m == Method::SortPM ? "sortpm" : "bisect";
    }

    MethodSelector parse_method_selector(const std::string &s)
    {
        if (s == "sortpm")
            return MethodSelector::SortPM;
        if (s == "bisect")
            return MethodSelector::Bisect;
        if (s == "both")
            return MethodSelector::Both;
        throw config_error("method must be one of sortpm, bisect, both; got '" + s + "'");
    }

    static const char *selector_name(MethodSelector s)
    {
        switch (s)
        {
        case MethodSelector::SortPM:
            return "sortpm";
        case MethodSelector::Bisect:
            return "bisect";
        case MethodSelector::Both:
            return "both";
        }
        return "both";
    }

    std::vector<Method> methods_of(MethodSelector sel)
    {
        switch (sel)
        {
        case MethodSelector::SortPM:
            return {Method::SortPM};
        case MethodSelector::Bisect:
            return {Method::Bisect};
        case MethodSelector::Both:
            break;
        }
        return {Method::SortPM, Method::Bisect};
    }

    // ---------------------------------------------------------------- config

    void ExperimentConfig::validate() const
    {
        if (!is_power_of_two(n_h) || !is_power_of_two(n_v))
            throw config_error("n_h and n_v must be positive powers of two");
        if (defect_h < 1 || defect_h > n_h || defect_v < 1 || defect_v > n_v)
            throw config_error("defect size must fit inside the grid");
        if (antennas.empty() || std::any_of(antennas.begin(), antennas.end(), [](int m) { return m < 1; }))
            throw config_error("antennas must be a nonempty list of positive counts");
        if (power_dbm.empty() || std::any_of(power_dbm.begin(), power_dbm.end(), [](double p) { return !std::isfinite(p); }))
            throw config_error("power_dbm must be a nonempty list of finite values");
        if (!std::isfinite(noise_dbm))
            throw config_error("noise_dbm must be finite");
        if (!(epsilon > 0.0 && epsilon < 1.0))
            throw config_error("epsilon must lie in (0, 1)");
        if (!(q > 0.0 && q < 0.5))
            throw config_error("q must lie in (0, 0.5)");
        if (!(alpha > 0.0 && alpha < 1.0))
            throw config_error("alpha must lie in (0, 1)");
        if (k_max < 1)
            throw config_error("k_max must be positive");
        if (trials < 1)
            throw config_error("trials must be positive");
        if (threads < 1)
            throw config_error("threads must be positive");
        if (std::abs(std::polar(1.0, init_phases.first) - std::polar(1.0, init_phases.second)) < 1e-12)
            throw config_error("init_phases must differ");
        if (std::abs(std::polar(1.0, probe_phases.first) - std::polar(1.0, probe_phases.second)) < 1e-12)
            throw config_error("probe_phases must differ");
        if (!(layout.wavelength > 0.0))
            throw config_error("geometry.wavelength must be positive");
        if (!(path_loss.tr > 0.0 && path_loss.ir > 0.0 && path_loss.ti > 0.0))
            throw config_error("path_loss entries must be positive");
    }

    namespace
    {
        template <typename T>
        void read(const json &j, const char *key, T &out)
        {
            if (j.contains(key))
                out = j.at(key).get<T>();
        }

        void read_pair(const json &j, const char *key, std::pair<double, double> &out)
        {
            if (!j.contains(key))
                return;
            const auto v = j.at(key).get<std::vector<double>>();
            if (v.size() != 2)
                throw config_error(std::string(key) + " must hold two phases");
            out = {v[0], v[1]};
        }

        void read_vec3(const json &j, const char *key, Vec3 &out)
        {
            if (!j.contains(key))
                return;
            const auto v = j.at(key).get<std::vector<double>>();
            if (v.size() != 3)
                throw config_error(std::string(key) + " must hold three coordinates");
            out = {v[0], v[1], v[2]};
        }

        void reject_unknown(const json &j, const std::vector<std::string> &known, const std::string &where)
        {
            for (const auto &[key, value] : j.items())
                if (std::find(known.begin(), known.end(), key) == known.end())
                    throw config_error("unknown config key '" + where + key + "'");
        }
    }

    ExperimentConfig config_from_json_text(const std::string &text)
    {
        ExperimentConfig cfg;
        try
        {
            const json j = json::parse(text);
            if (!j.is_object())
                throw config_error("config root must be an object");
            reject_unknown(j,
                           {"n_h", "n_v", "defect_h", "defect_v", "antennas", "power_dbm", "noise_dbm", "zero_noise",
                            "epsilon", "q", "alpha", "k_max", "trials", "seed", "method", "threads", "init_phases",
                            "probe_phases", "geometry", "path_loss"},
                           "");
            read(j, "n_h", cfg.n_h);
            read(j, "n_v", cfg.n_v);
            read(j, "defect_h", cfg.defect_h);
            read(j, "defect_v", cfg.defect_v);
            read(j, "antennas", cfg.antennas);
            read(j, "power_dbm", cfg.power_dbm);
            read(j, "noise_dbm", cfg.noise_dbm);
            read(j, "zero_noise", cfg.zero_noise);
            read(j, "epsilon", cfg.epsilon);
            read(j, "q", cfg.q);
            read(j, "alpha", cfg.alpha);
            read(j, "k_max", cfg.k_max);
            read(j, "trials", cfg.trials);
            read(j, "seed", cfg.base_seed);
            read(j, "threads", cfg.threads);
            if (j.contains("method"))
                cfg.method = parse_method_selector(j.at("method").get<std::string>());
            read_pair(j, "init_phases", cfg.init_phases);
            read_pair(j, "probe_phases", cfg.probe_phases);
            if (j.contains("geometry"))
            {
                const json &g = j.at("geometry");
                reject_unknown(g, {"wavelength", "tx_pos", "rx_center"}, "geometry.");
                read(g, "wavelength", cfg.layout.wavelength);
                read_vec3(g, "tx_pos", cfg.layout.tx_pos);
                read_vec3(g, "rx_center", cfg.layout.rx_center);
            }
            if (j.contains("path_loss"))
            {
                const json &p = j.at("path_loss");
                reject_unknown(p, {"tr", "ir", "ti"}, "path_loss.");
                read(p, "tr", cfg.path_loss.tr);
                read(p, "ir", cfg.path_loss.ir);
                read(p, "ti", cfg.path_loss.ti);
            }
        }
        catch (const json::exception &e)
        {
            throw config_error(std::string("config parse error: ") + e.what());
        }
        cfg.validate();
        return cfg;
    }

    ExperimentConfig load_config(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw config_error("cannot open config file '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return config_from_json_text(ss.str());
    }

    std::string config_to_json_text(const ExperimentConfig &cfg)
    {
        json j;
        j["n_h"] = cfg.n_h;
        j["n_v"] = cfg.n_v;
        j["defect_h"] = cfg.defect_h;
        j["defect_v"] = cfg.defect_v;
        j["antennas"] = cfg.antennas;
        j["power_dbm"] = cfg.power_dbm;
        j["noise_dbm"] = cfg.noise_dbm;
        j["zero_noise"] = cfg.zero_noise;
        j["epsilon"] = cfg.epsilon;
        j["q"] = cfg.q;
        j["alpha"] = cfg.alpha;
        j["k_max"] = cfg.k_max;
        j["trials"] = cfg.trials;
        j["seed"] = cfg.base_seed;
        j["method"] = selector_name(cfg.method);
        j["threads"] = cfg.threads;
        j["init_phases"] = {cfg.init_phases.first, cfg.init_phases.second};
        j["probe_phases"] = {cfg.probe_phases.first, cfg.probe_phases.second};
        j["geometry"] = {{"wavelength", cfg.layout.wavelength},
                         {"tx_pos", cfg.layout.tx_pos},
                         {"rx_center", cfg.layout.rx_center}};
        j["path_loss"] = {{"tr", cfg.path_loss.tr}, {"ir", cfg.path_loss.ir}, {"ti", cfg.path_loss.ti}};
        return j.dump(2);
    }

    // ---------------------------------------------------------------- trials

    std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b)
    {
        // splitmix64 finalizer over a combined word
        std::uint64_t z = a * 0x9E3779B97F4A7C15ULL + b + 0x632BE59BD9B4E019ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    TrialSeeds trial_seeds(const ExperimentConfig &cfg, std::size_t point_index, int trial)
    {
        const auto t = static_cast<std::uint64_t>(trial);
        return {mix_seed(mix_seed(cfg.base_seed, 0x5CE7E), t),
                mix_seed(mix_seed(mix_seed(cfg.base_seed, 0x7015E), point_index), t)};
    }

    FailureScene sample_scene(const ExperimentConfig &cfg, std::uint64_t scene_seed)
    {
        std::mt19937_64 rng(scene_seed);
        std::uniform_int_distribution<int> col(1, cfg.n_h - cfg.defect_h + 1);
        std::uniform_int_distribution<int> row(1, cfg.n_v - cfg.defect_v + 1);
        const int h_min = col(rng);
        const int v_min = row(rng);
        const DefectRect rect{h_min, h_min + cfg.defect_h - 1, v_min, v_min + cfg.defect_v - 1};
        std::uniform_real_distribution<double> phase(0.0, 2.0 * pi);
        std::vector<double> beta(static_cast<std::size_t>(cfg.defect_h * cfg.defect_v));
        for (auto &b : beta)
            b = 2.0 * pi - phase(rng); // (0, 2 pi]
        return FailureScene(cfg.dims(), rect, std::move(beta));
    }

    std::vector<TrialResult> diagnose_scene(const ExperimentConfig &cfg, const SweepPoint &point,
                                            const FailureScene &scene, std::uint64_t noise_seed)
    {
        const GridDims dims = scene.dims();
        const ChannelSet ch = synthesize_channels(
            dims, default_geometry(dims, static_cast<std::size_t>(point.antennas), cfg.layout), cfg.path_loss,
            cfg.noise_power());
        const cdouble pilot{std::sqrt(dbm_to_watts(point.p_t_dbm)), 0.0};

        NoiseSource init_rng(mix_seed(noise_seed, 1));
        const InitEstimates init = run_initialization(scene, ch, {pilot, pilot}, cfg.init_phases, init_rng);

        DetectorConfig det;
        det.alpha = cfg.alpha;
        det.phase_in = cfg.probe_phases.first;
        det.phase_out = cfg.probe_phases.second;
        const OverTheAirProber prober(scene, ch, init, pilot, det);

        std::vector<TrialResult> out;
        for (Method method : methods_of(cfg.method))
        {
            TrialResult r;
            r.method = method;
            r.point = point;
            r.seed = noise_seed;
            r.truth = scene.defect();
            r.slots_used = 2;
            if (method == Method::SortPM)
            {
                NoiseSource rng(mix_seed(noise_seed, 2));
                const SortPMParams params{cfg.q, cfg.epsilon, cfg.k_max};
                int *slots[] = {&r.estimate.h_min, &r.estimate.h_max, &r.estimate.v_min, &r.estimate.v_max};
                const BoundaryTarget targets[] = {BoundaryTarget::HMin, BoundaryTarget::HMax, BoundaryTarget::VMin,
                                                  BoundaryTarget::VMax};
                for (int i = 0; i < 4; ++i)
                {
                    const BoundaryEstimate b = estimate_boundary_sortpm(targets[i], prober, params, rng);
                    *slots[i] = b.index;
                    r.slots_used += b.slots;
                    r.rounds += b.search.rounds;
                    r.fallbacks += b.search.fallbacks;
                    r.converged = r.converged && b.search.converged;
                }
            }
            else
            {
                NoiseSource rng(mix_seed(noise_seed, 3));
                const BisectionResult hz = run_three_phase(Orientation::horizontal, prober, rng);
                const BisectionResult vt = run_three_phase(Orientation::vertical, prober, rng);
                r.estimate = {hz.n_min, hz.n_max, vt.n_min, vt.n_max};
                r.slots_used += hz.slots + vt.slots;
                r.rounds = hz.slots + vt.slots;
                r.coercions = hz.final_state.coercions + vt.final_state.coercions;
                r.slots_h = hz.slots;
                r.slots_v = vt.slots;
            }
            r.correct = r.estimate == r.truth;
            out.push_back(r);
        }
        return out;
    }

    std::vector<TrialResult> run_trial(const ExperimentConfig &cfg, const SweepPoint &point, const TrialSeeds &seeds,
                                       int trial_index)
    {
        cfg.validate();
        const FailureScene scene = sample_scene(cfg, seeds.scene);
        auto results = diagnose_scene(cfg, point, scene, seeds.noise);
        for (auto &r : results)
            r.trial = trial_index;
        return results;
    }

    // ---------------------------------------------------------------- sweep

    std::vector<SweepPoint> sweep_points(const ExperimentConfig &cfg)
    {
        std::vector<SweepPoint> pts;
        for (int m : cfg.antennas)
            for (double p : cfg.power_dbm)
                pts.push_back({p, m});
        return pts;
    }

    SweepResult sweep(const ExperimentConfig &cfg)
    {
        cfg.validate();
        SweepResult res;
        res.points = sweep_points(cfg);
        const std::size_t n_points = res.points.size();
        const auto n_trials = static_cast<std::size_t>(cfg.trials);

        std::vector<std::vector<TrialResult>> per_item(n_points * n_trials);
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            for (std::size_t item = next++; item < per_item.size(); item = next++)
            {
                const std::size_t p = item / n_trials;
                const int t = static_cast<int>(item % n_trials);
                try
                {
                    per_item[item] = run_trial(cfg, res.points[p], trial_seeds(cfg, p, t), t);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            }
        };
        const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(cfg.threads, per_item.size()));
        std::vector<std::thread> pool;
        for (unsigned i = 1; i < n_threads; ++i)
            pool.emplace_back(worker);
        worker();
        for (auto &th : pool)
            th.join();
        if (failure)
            std::rethrow_exception(failure);

        // sequential reduce in (point, method, trial) order
        const std::vector<Method> methods = methods_of(cfg.method);
        for (std::size_t p = 0; p < n_points; ++p)
        {
            for (std::size_t mi = 0; mi < methods.size(); ++mi)
            {
                Aggregate agg;
                agg.method = methods[mi];
                agg.point = res.points[p];
                for (std::size_t t = 0; t < n_trials; ++t)
                {
                    const TrialResult &r = per_item[p * n_trials + t][mi];
                    res.trials.push_back(r);
                    agg.accuracy += r.correct ? 1.0 : 0.0;
                    agg.mean_slots += r.slots_used;
                    agg.converged_fraction += r.converged ? 1.0 : 0.0;
                }
                agg.trials = static_cast<int>(n_trials);
                agg.accuracy /= static_cast<double>(n_trials);
                agg.mean_slots /= static_cast<double>(n_trials);
                agg.converged_fraction /= static_cast<double>(n_trials);
                res.aggregates.push_back(agg);
            }
        }
        return res;
    }

    // ---------------------------------------------------------------- CSV

    std::string csv_header()
    {
        return "version,method,p_t_dbm,m_antennas,trial,seed,true_hmin,true_hmax,true_vmin,true_vmax,"
               "est_hmin,est_hmax,est_vmin,est_vmax,correct,slots_used,converged";
    }

    namespace
    {
        std::string fmt(const char *pattern, double v)
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, pattern, v);
            return buf;
        }

        void write_trial_row(std::ostream &os, const TrialResult &r)
        {
            os << csv_schema_version << ',' << to_string(r.method) << ',' << fmt("%g", r.point.p_t_dbm) << ','
               << r.point.antennas << ',' << r.trial << ',' << r.seed << ',' << r.truth.h_min << ',' << r.truth.h_max
               << ',' << r.truth.v_min << ',' << r.truth.v_max << ',' << r.estimate.h_min << ',' << r.estimate.h_max
               << ',' << r.estimate.v_min << ',' << r.estimate.v_max << ',' << (r.correct ? 1 : 0) << ','
               << r.slots_used << ',' << (r.converged ? 1 : 0) << '\n';
        }

        // Aggregate rows: trial = "agg"; correct, slots_used and converged hold means
        void write_aggregate_row(std::ostream &os, const Aggregate &a)
        {
            os << csv_schema_version << ',' << to_string(a.method) << ',' << fmt("%g", a.point.p_t_dbm) << ','
               << a.point.antennas << ",agg,,,,,,,,,," << fmt("%.6f", a.accuracy) << ',' << fmt("%.6f", a.mean_slots)
               << ',' << fmt("%.6f", a.converged_fraction) << '\n';
        }
    }

    void write_csv(std::ostream &os, const SweepResult &result)
    {
        os << csv_header() << '\n';
        const std::size_t n_points = result.points.size();
        if (n_points == 0)
            return;
        const std::size_t per_point_aggs = result.aggregates.size() / n_points;
        const std::size_t per_point_rows = result.trials.size() / n_points;
        for (std::size_t p = 0; p < n_points; ++p)
        {
            for (std::size_t i = 0; i < per_point_rows; ++i)
                write_trial_row(os, result.trials[p * per_point_rows + i]);
            for (std::size_t i = 0; i < per_point_aggs; ++i)
                write_aggregate_row(os, result.aggregates[p * per_point_aggs + i]);
        }
    }

    void write_csv_file(const std::string &path, const SweepResult &result)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot open '" + path + "' for writing");
        write_csv(out, result);
        out.flush();
        if (!out)
            throw std::runtime_error("failed writing '" + path + "'");
    }

    // ---------------------------------------------------------------- worked examples

    namespace
    {
        class Checker
        {
        public:
            void expect(const std::string &name, bool ok, const std::string &detail = {})
            {
                results_.push_back({name, ok, detail});
            }

            void expect_vector(const std::string &name, const std::vector<double> &got, const std::vector<double> &want,
                               double tol)
            {
                bool ok = got.size() == want.size();
                std::ostringstream ss;
                ss << "got [";
                for (std::size_t i = 0; i < got.size(); ++i)
                {
                    ss << (i ? "," : "") << fmt("%.6f", got[i]);
                    if (ok && std::abs(got[i] - want[i]) > tol)
                        ok = false;
                }
                ss << "]";
                expect(name, ok, ss.str());
            }

            std::vector<CheckResult> take() { return std::move(results_); }

        private:
            std::vector<CheckResult> results_;
        };

        std::string join(const std::vector<int> &v)
        {
            std::string s = "{";
            for (std::size_t i = 0; i < v.size(); ++i)
                s += (i ? "," : "") + std::to_string(v[i]);
            return s + "}";
        }

        // Noiseless 4x4 surface with defects in columns and rows {2,3}
        struct ExampleSurface
        {
            GridDims dims{4, 4};
            FailureScene scene = FailureScene(dims, {2, 3, 2, 3}, {0.7, 2.1, 4.0, 5.5});
            ChannelSet ch = synthesize_channels(dims, default_geometry(dims, 4), PathLoss{}, 0.0);
            NoiseSource rng{7};
            InitEstimates init = run_initialization(scene, ch, {{1.0, 0.0}, {1.0, 0.0}}, {0.0, pi}, rng);
            OverTheAirProber prober{scene, ch, init, {1.0, 0.0}};
        };
    }

    std::vector<CheckResult> repro_examples()
    {
        Checker check;

        // Example 1: D = 2, omega = 1, one lie in the first round
        {
            const std::vector<int> script{0, 0, 1, 1};
            std::size_t k = 0;
            const SortPMResult r = run_sortpm_generic([&](const QuerySet &) { return script.at(k++); }, 2,
                                                      {0.1, 0.05, 100}, true);
            const std::vector<std::vector<double>> want{{0.1, 0.9}, {0.5, 0.5}, {0.9, 0.1}, {81.0 / 82, 1.0 / 82}};
            const std::vector<std::vector<int>> queries{{1}, {2}, {1}, {1}};
            check.expect("example1.rounds", r.rounds == 4 && r.converged, "rounds=" + std::to_string(r.rounds));
            for (std::size_t i = 0; i < r.history.size() && i < want.size(); ++i)
            {
                check.expect("example1.query" + std::to_string(i + 1), r.history[i].query.members == queries[i],
                             join(r.history[i].query.members));
                check.expect_vector("example1.posterior" + std::to_string(i + 1), r.history[i].posterior, want[i], 1e-12);
            }
            check.expect("example1.estimate", r.estimate == 1, "estimate=" + std::to_string(r.estimate));
        }

        // Example 2: three-phase bisection on columns of the 4x4 surface
        {
            const std::vector<CaseLabel> script{CaseLabel::Three, CaseLabel::Two, CaseLabel::One};
            std::size_t k = 0;
            const BisectionResult scripted = run_three_phase(Orientation::horizontal, 4, [&](const BoundaryQuery &) {
                return CaseVerdict{script.at(k++), {}};
            });
            const std::vector<double> cuts{2.5, 1.5, 3.5};
            const std::vector<BisectionState> bounds{
                {1, 2, 3, 4, BisectionPhase::II, 1, 0},
                {2, 2, 3, 4, BisectionPhase::III, 2, 0},
                {2, 2, 3, 3, BisectionPhase::Done, 3, 0},
            };
            check.expect("example2.slots", scripted.slots == 3, "slots=" + std::to_string(scripted.slots));
            for (std::size_t i = 0; i < scripted.trajectory.size() && i < cuts.size(); ++i)
            {
                const auto &st = scripted.trajectory[i];
                check.expect("example2.cut" + std::to_string(i + 1), st.cut == cuts[i], fmt("%g", st.cut));
                check.expect("example2.bounds" + std::to_string(i + 1), st.after == bounds[i],
                             std::to_string(st.after.lb_min) + "," + std::to_string(st.after.ub_min) + "," +
                                 std::to_string(st.after.lb_max) + "," + std::to_string(st.after.ub_max));
            }
            check.expect("example2.estimate", scripted.n_min == 2 && scripted.n_max == 3,
                         std::to_string(scripted.n_min) + "," + std::to_string(scripted.n_max));

            ExampleSurface s;
            const BisectionResult ota = run_three_phase(Orientation::horizontal, s.prober, s.rng);
            bool verdicts_match = ota.trajectory.size() == script.size();
            for (std::size_t i = 0; verdicts_match && i < script.size(); ++i)
                verdicts_match = ota.trajectory[i].verdict == script[i] && ota.trajectory[i].cut == cuts[i];
            check.expect("example2.noiseless_verdicts", verdicts_match);
            check.expect("example2.noiseless_estimate", ota.n_min == 2 && ota.n_max == 3 && ota.slots == 3,
                         std::to_string(ota.n_min) + "," + std::to_string(ota.n_max) + " in " +
                             std::to_string(ota.slots));
        }

        // Example 3: n_h,min on the 4x4 surface with a false first answer
        {
            const std::vector<int> script{0, 0, 0, 1, 0, 1};
            std::size_t k = 0;
            const BoundaryEstimate r = estimate_boundary_sortpm(
                BoundaryTarget::HMin, 4,
                [&](const RegionQuery &, Side) { return Answer{script.at(k++), 1}; }, {0.1, 0.05, 100}, true);
            const std::vector<std::vector<double>> want{
                {0.05, 0.05, 0.45, 0.45},         {0.0833, 0.0833, 0.0833, 0.75}, {0.25, 0.25, 0.25, 0.25},
                {0.45, 0.45, 0.05, 0.05},         {0.0833, 0.75, 0.0833, 0.0833}, {0.0119, 0.9643, 0.0119, 0.0119},
            };
            const std::vector<std::vector<int>> queries{{1, 2}, {3}, {4}, {1, 2}, {1}, {2}};
            check.expect("example3.rounds", r.search.rounds == 6 && r.search.converged,
                         "rounds=" + std::to_string(r.search.rounds));
            for (std::size_t i = 0; i < r.search.history.size() && i < want.size(); ++i)
            {
                check.expect("example3.query" + std::to_string(i + 1), r.search.history[i].query.members == queries[i],
                             join(r.search.history[i].query.members));
                check.expect_vector("example3.posterior" + std::to_string(i + 1), r.search.history[i].posterior,
                                    want[i], 5e-5);
            }
            check.expect("example3.estimate", r.index == 2, "estimate=" + std::to_string(r.index));

            // rounds 2..6 carry truthful answers; a noiseless surface must give the same bits
            ExampleSurface s;
            std::vector<int> bits;
            for (std::size_t i = 1; i < queries.size(); ++i)
                bits.push_back(s.prober.answer({Orientation::horizontal, queries[i]}, Side::Left, s.rng).bit);
            check.expect("example3.noiseless_answers", bits == std::vector<int>(script.begin() + 1, script.end()),
                         join(bits));
        }
        return check.take();
    }

    // ---------------------------------------------------------------- calibration

    CalibrationResult calibrate(const ExperimentConfig &base, const std::vector<double> &noise_grid_dbm)
    {
        base.validate();
        CalibrationResult res;
        const auto [lo, hi] = std::minmax_element(base.power_dbm.begin(), base.power_dbm.end());
        for (double noise : noise_grid_dbm)
        {
            ExperimentConfig cfg = base;
            cfg.noise_dbm = noise;
            cfg.zero_noise = false;
            cfg.method = MethodSelector::Both;
            cfg.power_dbm = {*lo, *hi};
            cfg.antennas = {base.antennas.front()};
            const SweepResult s = sweep(cfg);
            CalibrationRow row{noise, 0, 0, 0, 0};
            for (const Aggregate &a : s.aggregates)
            {
                const bool low = a.point.p_t_dbm == *lo;
                double &slot = a.method == Method::SortPM ? (low ? row.acc_low_sortpm : row.acc_high_sortpm)
                                                          : (low ? row.acc_low_bisect : row.acc_high_bisect);
                slot = a.accuracy;
            }
            res.rows.push_back(row);
        }
        // the noisiest level that keeps both methods reliable at the top of the power grid
        for (const CalibrationRow &row : res.rows)
        {
            const bool wide = row.acc_low_bisect < 0.5 && row.acc_high_sortpm >= 0.98 && row.acc_high_bisect >= 0.98;
            if (wide && (!res.found || row.noise_dbm > res.chosen_noise_dbm))
            {
                res.found = true;
                res.chosen_noise_dbm = row.noise_dbm;
            }
        }
        return res;
    }
}
