#include "latlab/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "latlab/errors.hpp"
#include "latlab/serialize.hpp"

namespace latlab {

using nlohmann::json;

namespace {

// Strict schema: every present key must be known, every required key present.
void expect_keys(const json& obj, const std::string& ctx,
                 const std::set<std::string>& required, const std::set<std::string>& optional) {
    if (!obj.is_object()) throw ConfigError(ctx + ": expected a JSON object");
    for (const auto& item : obj.items()) {
        if (!required.count(item.key()) && !optional.count(item.key()))
            throw ConfigError(ctx + ": unknown key '" + item.key() + "'");
    }
    for (const auto& key : required) {
        if (!obj.contains(key)) throw ConfigError(ctx + ": missing required key '" + key + "'");
    }
}

double get_number(const json& obj, const std::string& ctx, const std::string& key) {
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(ctx + ": '" + key + "' must be a number");
    return v.get<double>();
}

long get_integer(const json& obj, const std::string& ctx, const std::string& key) {
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) throw ConfigError(ctx + ": '" + key + "' must be an integer");
    return v.get<long>();
}

MonotoneScalarFunction parse_nonlinearity(const json& j) {
    expect_keys(j, "nonlinearity", {"kind"}, {"c", "odd_coeffs", "check_radius"});
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "cubic") {
        return MonotoneScalarFunction::cubic();
    }
    if (kind == "linear") {
        if (!j.contains("c")) throw ConfigError("nonlinearity: linear needs 'c'");
        return MonotoneScalarFunction::linear(get_number(j, "nonlinearity", "c"));
    }
    if (kind == "custom") {
        if (!j.contains("odd_coeffs")) throw ConfigError("nonlinearity: custom needs 'odd_coeffs'");
        std::vector<double> coeffs = j.at("odd_coeffs").get<std::vector<double>>();
        double radius = j.contains("check_radius") ? get_number(j, "nonlinearity", "check_radius") : 4.0;
        return MonotoneScalarFunction::odd_polynomial(std::move(coeffs), radius);
    }
    throw ConfigError("nonlinearity: unknown kind '" + kind + "'");
}

// default_halfwidth: used for the dyadic rule when active_halfwidth is
// omitted; chosen so the dropped forcing mass sits below the integration
// tolerance.
QuasiPeriodicForcing parse_forcing(const json& j, long default_halfwidth) {
    expect_keys(j, "forcing", {"kind", "amp_rule"},
                {"sites", "active_halfwidth", "phase", "omega_rule"});
    std::string kind = j.at("kind").get<std::string>();
    if (kind != "quasi_periodic") throw ConfigError("forcing: unknown kind '" + kind + "'");
    std::string rule = j.at("amp_rule").get<std::string>();
    double phase = j.contains("phase") ? get_number(j, "forcing", "phase") : 0.0;

    auto parse_sites = [](const json& arr) {
        std::vector<ForcingSite> sites;
        for (const auto& s : arr) {
            expect_keys(s, "forcing site", {"i", "omega"}, {"amp"});
            ForcingSite site;
            site.site = get_integer(s, "forcing site", "i");
            site.omega = get_number(s, "forcing site", "omega");
            site.amp = s.contains("amp") ? get_number(s, "forcing site", "amp") : 0.0;
            sites.push_back(site);
        }
        return sites;
    };

    if (rule == "explicit") {
        if (!j.contains("sites")) throw ConfigError("forcing: explicit amp_rule needs 'sites'");
        auto sites = parse_sites(j.at("sites"));
        for (const auto& s : j.at("sites")) {
            if (!s.contains("amp"))
                throw ConfigError("forcing: explicit amp_rule needs 'amp' on every site");
        }
        QuasiPeriodicForcing f = QuasiPeriodicForcing::explicit_sites(std::move(sites));
        if (j.contains("active_halfwidth")) {
            long hw = get_integer(j, "forcing", "active_halfwidth");
            if (hw < f.active_halfwidth())
                throw ConfigError("forcing: active_halfwidth smaller than listed sites");
        }
        return f.shift(phase);
    }
    if (rule == "dyadic") {
        long hw = default_halfwidth;
        if (j.contains("active_halfwidth")) {
            hw = get_integer(j, "forcing", "active_halfwidth");
        } else if (!j.contains("omega_rule")) {
            throw ConfigError("forcing: dyadic amp_rule needs 'active_halfwidth' when no "
                              "omega_rule covers the default window");
        }
        double base = 0.0, delta = 0.0;
        bool have_rule = j.contains("omega_rule");
        if (have_rule) {
            expect_keys(j.at("omega_rule"), "omega_rule", {"base"}, {"delta"});
            base = get_number(j.at("omega_rule"), "omega_rule", "base");
            delta = j.at("omega_rule").contains("delta")
                        ? get_number(j.at("omega_rule"), "omega_rule", "delta")
                        : 0.0;
        }
        std::vector<ForcingSite> overrides;
        if (j.contains("sites")) overrides = parse_sites(j.at("sites"));
        if (!have_rule) {
            // without a rule every active site needs an explicit frequency
            std::set<long> given;
            for (const auto& s : overrides) given.insert(s.site);
            for (long i = -hw; i <= hw; ++i) {
                if (!given.count(i))
                    throw ConfigError("forcing: dyadic rule without omega_rule must list every "
                                      "active site");
            }
        }
        auto omega_of = [&](long i) {
            for (const auto& s : overrides) {
                if (s.site == i) return s.omega;
            }
            return base + delta * static_cast<double>(std::labs(i));
        };
        return QuasiPeriodicForcing::dyadic(hw, omega_of).shift(phase);
    }
    throw ConfigError("forcing: unknown amp_rule '" + rule + "'");
}

InitialCondition parse_initial(const json& j) {
    expect_keys(j, "initial", {"kind"}, {"norm", "offset", "values"});
    InitialCondition ic;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "zero") {
        ic.kind = InitialCondition::Kind::Zero;
    } else if (kind == "random") {
        ic.kind = InitialCondition::Kind::Random;
        if (j.contains("norm")) ic.norm = get_number(j, "initial", "norm");
        if (!(ic.norm >= 0.0)) throw ConfigError("initial: norm must be >= 0");
    } else if (kind == "window") {
        ic.kind = InitialCondition::Kind::Window;
        if (!j.contains("offset") || !j.contains("values"))
            throw ConfigError("initial: window kind needs offset and values");
        ic.window = LatticeWindow(get_integer(j, "initial", "offset"),
                                  j.at("values").get<std::vector<double>>());
    } else {
        throw ConfigError("initial: unknown kind '" + kind + "'");
    }
    return ic;
}

ExperimentSpec parse_experiment(const json& j) {
    ExperimentSpec e;
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError("experiment: missing 'kind'");
    e.kind = j.at("kind").get<std::string>();

    if (e.kind == "simulate") {
        expect_keys(j, "experiment", {"kind", "t0", "t1", "sample_step", "initial"},
                    {"csv_sites"});
        e.t0 = get_number(j, "experiment", "t0");
        e.t1 = get_number(j, "experiment", "t1");
        e.sample_step = get_number(j, "experiment", "sample_step");
        e.initial = parse_initial(j.at("initial"));
        if (j.contains("csv_sites")) {
            auto arr = j.at("csv_sites");
            if (!arr.is_array() || arr.size() != 2)
                throw ConfigError("experiment: csv_sites must be [lo, hi]");
            e.csv_sites = {arr[0].get<long>(), arr[1].get<long>()};
        }
        if (e.t1 < e.t0) throw ConfigError("experiment: t1 must be >= t0");
        if (!(e.sample_step >= 0.0)) throw ConfigError("experiment: sample_step must be >= 0");
    } else if (e.kind == "pullback") {
        expect_keys(j, "experiment", {"kind", "s", "T"}, {"initial"});
        e.anchor_s = get_number(j, "experiment", "s");
        e.horizon = get_number(j, "experiment", "T");
        if (e.horizon < 0.0) throw ConfigError("experiment: pullback horizon T must be >= 0");
        e.initial = j.contains("initial") ? parse_initial(j.at("initial")) : InitialCondition{};
    } else if (e.kind == "apscan") {
        expect_keys(j, "experiment", {"kind", "trajectory_csv", "epsilon", "tau_max"}, {});
        e.trajectory_csv = j.at("trajectory_csv").get<std::string>();
        e.epsilon = get_number(j, "experiment", "epsilon");
        e.tau_max = get_number(j, "experiment", "tau_max");
        if (!(e.epsilon > 0.0)) throw ConfigError("experiment: epsilon must be > 0");
        if (!(e.tau_max > 0.0)) throw ConfigError("experiment: tau_max must be > 0");
    } else if (e.kind == "contraction") {
        expect_keys(j, "experiment", {"kind", "t1", "sample_step"}, {"pairs", "ic_norm"});
        e.t1 = get_number(j, "experiment", "t1");
        e.sample_step = get_number(j, "experiment", "sample_step");
        if (j.contains("pairs")) e.pairs = get_integer(j, "experiment", "pairs");
        if (j.contains("ic_norm")) e.ic_norm = get_number(j, "experiment", "ic_norm");
        if (!(e.t1 > 0.0)) throw ConfigError("experiment: t1 must be > 0");
        if (!(e.sample_step > 0.0)) throw ConfigError("experiment: sample_step must be > 0");
        if (e.pairs < 1) throw ConfigError("experiment: pairs must be >= 1");
    } else if (e.kind == "sweep") {
        expect_keys(j, "experiment", {"kind", "lambda_values", "nu_values", "t1", "sample_step"},
                    {"ic_norm", "pullback_T"});
        e.lambda_values = j.at("lambda_values").get<std::vector<double>>();
        e.nu_values = j.at("nu_values").get<std::vector<double>>();
        e.t1 = get_number(j, "experiment", "t1");
        e.sample_step = get_number(j, "experiment", "sample_step");
        if (j.contains("ic_norm")) e.ic_norm = get_number(j, "experiment", "ic_norm");
        if (j.contains("pullback_T")) e.pullback_horizon = get_number(j, "experiment", "pullback_T");
        if (e.lambda_values.empty() || e.nu_values.empty())
            throw ConfigError("experiment: sweep grid must be nonempty");
        if (!(e.t1 > 0.0) || !(e.sample_step > 0.0))
            throw ConfigError("experiment: sweep needs t1 > 0 and sample_step > 0");
    } else {
        throw ConfigError("experiment: unknown kind '" + e.kind + "'");
    }
    return e;
}

} // namespace

RunConfig RunConfig::from_json_text(const std::string& bytes) {
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    expect_keys(j, "config",
                {"params", "nonlinearity", "forcing", "window_halfwidth", "seed", "experiment"},
                {"integrator"});

    RunConfig cfg;
    expect_keys(j.at("params"), "params", {"nu", "lambda"}, {});
    cfg.params.nu = get_number(j.at("params"), "params", "nu");
    cfg.params.lambda = get_number(j.at("params"), "params", "lambda");
    cfg.params.validate();

    cfg.nonlinearity = parse_nonlinearity(j.at("nonlinearity"));

    cfg.integrator.window_halfwidth = get_integer(j, "config", "window_halfwidth");
    if (j.contains("integrator")) {
        const auto& ji = j.at("integrator");
        expect_keys(ji, "integrator", {}, {"rel_tol", "abs_tol", "max_step", "initial_step"});
        if (ji.contains("rel_tol")) cfg.integrator.rel_tol = get_number(ji, "integrator", "rel_tol");
        if (ji.contains("abs_tol")) cfg.integrator.abs_tol = get_number(ji, "integrator", "abs_tol");
        if (ji.contains("max_step")) cfg.integrator.max_step = get_number(ji, "integrator", "max_step");
        if (ji.contains("initial_step"))
            cfg.integrator.initial_step = get_number(ji, "integrator", "initial_step");
    }
    cfg.integrator.validate();

    // when active_halfwidth is omitted, drop forcing mass only below the
    // integration tolerance: smallest n with (2/3) 4^{-n} < rel_tol^2 / 8
    long default_hw = QuasiPeriodicForcing::dyadic_affine(0, 1.0, 0.0)
                          .choose_window(cfg.integrator.rel_tol);
    cfg.forcing = parse_forcing(j.at("forcing"), default_hw);

    if (!j.at("seed").is_number_integer() || j.at("seed").get<long long>() < 0)
        throw ConfigError("config: seed must be a nonnegative integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();

    cfg.experiment = parse_experiment(j.at("experiment"));

    cfg.canonical_json = j.dump(2);
    cfg.hash = content_hash_hex(bytes);
    return cfg;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    RunConfig cfg = from_json_text(buf.str());
    cfg.base_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    return cfg;
}

} // namespace latlab
