#include "latlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "latlab/analysis.hpp"
#include "latlab/errors.hpp"
#include "latlab/pullback.hpp"
#include "latlab/serialize.hpp"

namespace latlab {

using nlohmann::json;

namespace {

std::string manifest_json(const RunConfig& cfg, const std::vector<std::string>& output_names) {
    json m;
    m["config_hash"] = cfg.hash;
    m["seed"] = cfg.seed;
    m["M"] = cfg.forcing.sup_norm();
    m["alpha"] = cfg.nonlinearity.alpha();
    m["lambda_plus_alpha"] = cfg.params.rate(cfg.nonlinearity);
    m["outputs"] = output_names;
    m["config"] = json::parse(cfg.canonical_json);
    return m.dump(2) + "\n";
}

void attach_manifest(const RunConfig& cfg, ExperimentResult& result) {
    std::vector<std::string> names;
    for (const auto& f : result.files) names.push_back(f.name);
    result.files.push_back({"manifest.json", manifest_json(cfg, names)});
}

LatticeWindow random_window(long halfwidth, double target_norm, CounterRng& rng) {
    std::vector<double> vals(static_cast<std::size_t>(2 * halfwidth + 1));
    for (double& v : vals) v = rng.uniform(-1.0, 1.0);
    LatticeWindow w(-halfwidth, std::move(vals));
    double n = norm(w);
    if (n == 0.0 || target_norm == 0.0) return scale(0.0, w);
    return scale(target_norm / n, w);
}

ExperimentResult run_simulate(const RunConfig& cfg, CounterRng& rng) {
    const auto& e = cfg.experiment;
    LatticeWindow v0 = make_initial(e.initial, cfg.integrator.window_halfwidth, rng);
    TrajectorySample traj = integrate(cfg.params, cfg.nonlinearity, cfg.forcing, v0, e.t0, e.t1,
                                      cfg.integrator, e.sample_step);
    long lo = -cfg.integrator.window_halfwidth, hi = cfg.integrator.window_halfwidth;
    if (e.csv_sites) {
        lo = e.csv_sites->first;
        hi = e.csv_sites->second;
    }
    ExperimentResult result;
    result.files.push_back({"trajectory.csv", trajectory_to_csv(traj, lo, hi)});
    std::ostringstream os;
    os << "simulate: " << traj.times.size() << " samples on [" << e.t0 << ", " << e.t1
       << "], final norm " << norm(traj.final_state());
    result.summary = os.str();
    return result;
}

ExperimentResult run_pullback(const RunConfig& cfg, CounterRng& rng) {
    const auto& e = cfg.experiment;
    LatticeWindow v0 = make_initial(e.initial, cfg.integrator.window_halfwidth, rng);
    PullbackResult res = pullback_solution(cfg.params, cfg.nonlinearity, cfg.forcing, e.anchor_s,
                                           e.horizon, v0, cfg.integrator);
    std::ostringstream js;
    js << "{\"s\": " << format_double17(res.anchor_time)
       << ", \"T\": " << format_double17(res.horizon)
       << ", \"error_bound\": " << format_double17(res.error_bound)
       << ", \"state\": " << window_to_json(res.state) << "}\n";
    ExperimentResult result;
    result.files.push_back({"pullback.json", js.str()});
    std::ostringstream os;
    os << "pullback: anchor s = " << res.anchor_time << ", horizon T = " << res.horizon
       << ", error bound " << res.error_bound << ", state norm " << norm(res.state);
    result.summary = os.str();
    return result;
}

ExperimentResult run_apscan(const RunConfig& cfg, unsigned threads) {
    const auto& e = cfg.experiment;
    std::filesystem::path path(e.trajectory_csv);
    if (path.is_relative() && !cfg.base_dir.empty()) path = cfg.base_dir / path;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("apscan: cannot open trajectory CSV " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    TrajectorySample traj = trajectory_from_csv(buf.str());

    std::vector<std::pair<double, double>> all;
    AlmostPeriodReport report = almost_period_scan(traj, e.epsilon, e.tau_max, &all, threads);

    json j;
    j["epsilon"] = report.epsilon;
    j["tau_max"] = report.tau_max;
    j["grid_step"] = report.grid_step;
    j["scan_begin"] = report.scan_begin;
    j["scan_end"] = report.scan_end;
    j["taus"] = report.taus;
    j["sup_defects"] = report.sup_defects;
    j["max_gap"] = report.max_gap;

    std::ostringstream csv;
    csv << "tau,sup_defect\n";
    for (const auto& [tau, defect] : all)
        csv << format_double17(tau) << ',' << format_double17(defect) << '\n';

    ExperimentResult result;
    result.files.push_back({"apscan.json", j.dump(2) + "\n"});
    result.files.push_back({"apscan_defects.csv", csv.str()});
    std::ostringstream os;
    os << "apscan: " << report.taus.size() << " almost periods with defect < " << e.epsilon
       << " in [0, " << e.tau_max << "], max gap " << report.max_gap;
    result.summary = os.str();
    return result;
}

struct PairRun {
    std::vector<double> times;
    std::vector<double> gap_norms;
    double slope = 0.0;
};

PairRun contraction_pair(const RunConfig& cfg, const LatticeWindow& v1, const LatticeWindow& v2,
                         double t1, double sample_step) {
    std::vector<double> samples;
    long count = static_cast<long>(std::floor(t1 / sample_step + 1e-9));
    for (long k = 0; k <= count; ++k) samples.push_back(static_cast<double>(k) * sample_step);
    // one joint run: the pair shares the adaptive step sequence, so the gap
    // series measures the contraction of the flow, not step jitter
    auto runs = integrate_joint(cfg.params, cfg.nonlinearity, cfg.forcing, {v1, v2},
                                {cfg.integrator.window_halfwidth, cfg.integrator.window_halfwidth},
                                0.0, t1, cfg.integrator, samples);
    PairRun out;
    out.times = runs[0].times;
    for (std::size_t k = 0; k < runs[0].states.size(); ++k)
        out.gap_norms.push_back(norm(subtract(runs[0].states[k], runs[1].states[k])));
    out.slope = fit_decay_rate(out.times, out.gap_norms, 100.0 * cfg.integrator.abs_tol);
    return out;
}

ExperimentResult run_contraction(const RunConfig& cfg, CounterRng& rng) {
    const auto& e = cfg.experiment;
    const double rate = cfg.params.rate(cfg.nonlinearity);
    const double slope_bound = -rate * 0.95;

    std::vector<PairRun> pairs;
    for (long p = 0; p < e.pairs; ++p) {
        // substream per pair: pair p of a contraction run and cell p of a sweep
        // draw the same initial data for the same seed
        CounterRng pair_rng = rng.substream(static_cast<std::uint64_t>(p) + 1);
        LatticeWindow v1 = random_window(cfg.integrator.window_halfwidth, e.ic_norm, pair_rng);
        LatticeWindow v2 = random_window(cfg.integrator.window_halfwidth, e.ic_norm, pair_rng);
        pairs.push_back(contraction_pair(cfg, v1, v2, e.t1, e.sample_step));
    }

    bool pass = true;
    json j;
    j["rate"] = rate;
    j["slope_bound"] = slope_bound;
    j["slopes"] = json::array();
    for (const auto& p : pairs) {
        j["slopes"].push_back(p.slope);
        if (!(p.slope <= slope_bound)) pass = false;
    }
    j["pass"] = pass;

    std::ostringstream csv;
    csv << "t";
    for (std::size_t p = 0; p < pairs.size(); ++p) csv << ",pair_" << p;
    csv << '\n';
    for (std::size_t k = 0; k < pairs.front().times.size(); ++k) {
        csv << format_double17(pairs.front().times[k]);
        for (const auto& p : pairs) csv << ',' << format_double17(p.gap_norms[k]);
        csv << '\n';
    }

    ExperimentResult result;
    result.files.push_back({"contraction.json", j.dump(2) + "\n"});
    result.files.push_back({"contraction_norms.csv", csv.str()});
    result.property_pass = pass;
    std::ostringstream os;
    os << "contraction: " << pairs.size() << " pairs, slope bound " << slope_bound << ", slopes";
    for (const auto& p : pairs) os << ' ' << p.slope;
    os << (pass ? " (pass)" : " (FAIL)");
    result.summary = os.str();
    return result;
}

struct SweepRow {
    double lambda = 0.0, nu = 0.0;
    double slope = 0.0, entry_time = 0.0, pullback_proxy = 0.0;
    bool ok = false;
    std::string status;
};

SweepRow sweep_cell(const RunConfig& base, double lambda, double nu, CounterRng rng) {
    SweepRow row;
    row.lambda = lambda;
    row.nu = nu;
    try {
        RunConfig cfg = base;
        cfg.params.lambda = lambda;
        cfg.params.nu = nu;
        cfg.params.validate();
        const auto& e = base.experiment;

        LatticeWindow v1 = random_window(cfg.integrator.window_halfwidth, e.ic_norm, rng);
        LatticeWindow v2 = random_window(cfg.integrator.window_halfwidth, e.ic_norm, rng);
        PairRun pair = contraction_pair(cfg, v1, v2, e.t1, e.sample_step);
        row.slope = pair.slope;

        double rate = cfg.params.rate(cfg.nonlinearity);
        double radius = cfg.forcing.sup_norm() / rate + 0.1;
        TrajectorySample traj = integrate(cfg.params, cfg.nonlinearity, cfg.forcing, v1, 0.0,
                                          e.t1, cfg.integrator, e.sample_step);
        AbsorbingReport absorb = absorbing_ball_check(traj, radius);
        row.entry_time = absorb.entered_at ? *absorb.entered_at
                                           : std::numeric_limits<double>::quiet_NaN();

        LatticeWindow seed = LatticeWindow::zeros(0, 1);
        PullbackResult pa = pullback_solution(cfg.params, cfg.nonlinearity, cfg.forcing, 0.0,
                                              e.pullback_horizon, seed, cfg.integrator);
        PullbackResult pb = pullback_solution(cfg.params, cfg.nonlinearity, cfg.forcing, 0.0,
                                              e.pullback_horizon + 2.0, seed, cfg.integrator);
        row.pullback_proxy = norm(subtract(pa.state, pb.state));
        row.ok = true;
        row.status = "ok";
    } catch (const std::exception& ex) {
        row.ok = false;
        row.status = std::string("error: ") + ex.what();
    }
    return row;
}

ExperimentResult run_sweep(const RunConfig& cfg, CounterRng& rng, unsigned threads) {
    const auto& e = cfg.experiment;
    std::vector<std::pair<double, double>> grid;
    for (double l : e.lambda_values)
        for (double n : e.nu_values) grid.emplace_back(l, n);

    std::vector<SweepRow> rows(grid.size());
    std::uint64_t base_seed = rng.seed();
    auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            CounterRng cell_rng = CounterRng(base_seed).substream(k + 1);
            rows[k] = sweep_cell(cfg, grid[k].first, grid[k].second, cell_rng);
        }
    };
    if (threads <= 1 || grid.size() < 2) {
        work(0, grid.size());
    } else {
        unsigned nt = std::min<unsigned>(threads, static_cast<unsigned>(grid.size()));
        std::vector<std::thread> pool;
        std::size_t chunk = (grid.size() + nt - 1) / nt;
        for (unsigned w = 0; w < nt; ++w) {
            std::size_t lo = w * chunk, hi = std::min(grid.size(), lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    std::ostringstream csv;
    csv << "lambda,nu,slope,absorb_entry_time,pullback_error_proxy,status\n";
    for (const auto& row : rows) {
        csv << format_double17(row.lambda) << ',' << format_double17(row.nu) << ','
            << (row.ok ? format_double17(row.slope) : "") << ','
            << (row.ok && std::isfinite(row.entry_time) ? format_double17(row.entry_time) : "")
            << ',' << (row.ok ? format_double17(row.pullback_proxy) : "") << ',' << row.status
            << '\n';
    }

    ExperimentResult result;
    result.files.push_back({"sweep.csv", csv.str()});
    std::size_t failures = 0;
    for (const auto& row : rows)
        if (!row.ok) ++failures;
    std::ostringstream os;
    os << "sweep: " << rows.size() << " cells, " << failures << " flagged";
    result.summary = os.str();
    return result;
}

} // namespace

LatticeWindow make_initial(const InitialCondition& ic, long window_halfwidth, CounterRng& rng) {
    switch (ic.kind) {
        case InitialCondition::Kind::Zero: return LatticeWindow::zeros(0, 1);
        case InitialCondition::Kind::Random: return random_window(window_halfwidth, ic.norm, rng);
        case InitialCondition::Kind::Window: return ic.window;
    }
    return LatticeWindow::zeros(0, 1);
}

unsigned thread_count_from_env() {
    if (const char* env = std::getenv("LATLAB_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= 256) return static_cast<unsigned>(v);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return std::clamp(hc, 1u, 8u);
}

ExperimentResult run_experiment(const RunConfig& config, unsigned threads) {
    CounterRng rng(config.seed);
    ExperimentResult result;
    const std::string& kind = config.experiment.kind;
    if (kind == "simulate") {
        result = run_simulate(config, rng);
    } else if (kind == "pullback") {
        result = run_pullback(config, rng);
    } else if (kind == "apscan") {
        result = run_apscan(config, threads);
    } else if (kind == "contraction") {
        result = run_contraction(config, rng);
    } else if (kind == "sweep") {
        result = run_sweep(config, rng, threads);
    } else {
        throw ConfigError("run_experiment: unknown kind '" + kind + "'");
    }
    attach_manifest(config, result);
    return result;
}

} // namespace latlab
