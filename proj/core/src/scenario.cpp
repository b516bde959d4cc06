// Copyright 2026 the mlt authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "mlt/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mlt::io {

namespace {

using nlohmann::json;

struct Ctx {
    const json& j;
    std::string path;

    Ctx at(const std::string& key) const { return Ctx{j.at(key), path + "/" + key}; }
    Ctx at(std::size_t i) const {
        return Ctx{j.at(i), path + "/" + std::to_string(i)};
    }
};

[[noreturn]] void fail(const Ctx& ctx, const std::string& message) {
    throw ConfigError(message, ctx.path.empty() ? "/" : ctx.path);
}

void require_object(const Ctx& ctx) {
    if (!ctx.j.is_object()) fail(ctx, "expected an object");
}

void reject_unknown(const Ctx& ctx, const std::set<std::string>& allowed) {
    require_object(ctx);
    for (const auto& item : ctx.j.items())
        if (!allowed.count(item.key())) fail(ctx, "unknown key '" + item.key() + "'");
}

bool has(const Ctx& ctx, const std::string& key) {
    return ctx.j.is_object() && ctx.j.contains(key);
}

double get_double(const Ctx& ctx) {
    if (!ctx.j.is_number()) fail(ctx, "expected a number");
    return ctx.j.get<double>();
}

std::int64_t get_int(const Ctx& ctx) {
    if (!ctx.j.is_number_integer()) fail(ctx, "expected an integer");
    return ctx.j.get<std::int64_t>();
}

std::string get_string(const Ctx& ctx) {
    if (!ctx.j.is_string()) fail(ctx, "expected a string");
    return ctx.j.get<std::string>();
}

std::vector<double> get_double_array(const Ctx& ctx) {
    if (!ctx.j.is_array()) fail(ctx, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < ctx.j.size(); ++i) out.push_back(get_double(ctx.at(i)));
    return out;
}

campbell::Point2 parse_point(const Ctx& ctx) {
    const std::vector<double> v = get_double_array(ctx);
    if (v.size() != 2) fail(ctx, "expected a point [x, y]");
    return {v[0], v[1]};
}

template <typename F>
auto rethrow_as_config(const Ctx& ctx, F&& body) {
    try {
        return body();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        fail(ctx, e.what());
    }
}

campbell::PathLoss parse_path_loss(const Ctx& ctx) {
    const std::string type = get_string(ctx.at("type"));
    return rethrow_as_config(ctx, [&] {
        if (type == "power_law") {
            reject_unknown(ctx, {"type", "k", "alpha", "exclusion_radius"});
            const double excl =
                has(ctx, "exclusion_radius") ? get_double(ctx.at("exclusion_radius")) : 0.0;
            return campbell::PathLoss::power_law(get_double(ctx.at("k")),
                                                 get_double(ctx.at("alpha")), excl);
        }
        if (type == "bounded_power_law") {
            reject_unknown(ctx, {"type", "k", "alpha"});
            return campbell::PathLoss::bounded_power_law(get_double(ctx.at("k")),
                                                         get_double(ctx.at("alpha")));
        }
        fail(ctx.at("type"), "unknown path loss type '" + type + "'");
    });
}

dist::FadingModel parse_fading(const Ctx& ctx) {
    const std::string type = get_string(ctx.at("type"));
    return rethrow_as_config(ctx, [&] {
        if (type == "deterministic") {
            reject_unknown(ctx, {"type", "value"});
            return dist::FadingModel::deterministic(get_double(ctx.at("value")));
        }
        if (type == "exponential") {
            reject_unknown(ctx, {"type", "rate"});
            return dist::FadingModel::exponential(get_double(ctx.at("rate")));
        }
        if (type == "erlang") {
            reject_unknown(ctx, {"type", "shape", "rate"});
            return dist::FadingModel::erlang(static_cast<int>(get_int(ctx.at("shape"))),
                                             get_double(ctx.at("rate")));
        }
        if (type == "nakagami") {
            reject_unknown(ctx, {"type", "m", "mean_power"});
            return dist::FadingModel::nakagami(static_cast<int>(get_int(ctx.at("m"))),
                                               get_double(ctx.at("mean_power")));
        }
        if (type == "phase_type") {
            reject_unknown(ctx, {"type", "negated_subgenerator", "sub_pmf"});
            const Ctx mat = ctx.at("negated_subgenerator");
            if (!mat.j.is_array() || mat.j.empty()) fail(mat, "expected a square matrix");
            const std::size_t n = mat.j.size();
            Eigen::MatrixXd s(n, n);
            for (std::size_t i = 0; i < n; ++i) {
                const std::vector<double> row = get_double_array(mat.at(i));
                if (row.size() != n) fail(mat.at(i), "matrix row size mismatch");
                for (std::size_t c = 0; c < n; ++c) s(i, c) = row[c];
            }
            const std::vector<double> pv = get_double_array(ctx.at("sub_pmf"));
            if (pv.size() != n) fail(ctx.at("sub_pmf"), "sub_pmf size mismatch");
            Eigen::VectorXd p(n);
            for (std::size_t i = 0; i < n; ++i) p(i) = pv[i];
            return dist::FadingModel::phase_type(dist::PhaseType(std::move(s), std::move(p)));
        }
        fail(ctx.at("type"), "unknown fading type '" + type + "'");
    });
}

campbell::ShotNoiseScenario parse_shot_noise(const Ctx& ctx) {
    reject_unknown(ctx, {"intensity", "path_loss", "fading", "combination", "exclusion"});
    const double intensity = get_double(ctx.at("intensity"));
    campbell::PathLoss pl = parse_path_loss(ctx.at("path_loss"));
    dist::FadingModel fading = parse_fading(ctx.at("fading"));

    std::vector<campbell::CombinationTerm> terms = {{1.0, {0.0, 0.0}}};
    if (has(ctx, "combination")) {
        const Ctx arr = ctx.at("combination");
        if (!arr.j.is_array() || arr.j.empty()) fail(arr, "expected a nonempty array");
        terms.clear();
        for (std::size_t i = 0; i < arr.j.size(); ++i) {
            const Ctx term = arr.at(i);
            reject_unknown(term, {"weight", "point"});
            terms.push_back({get_double(term.at("weight")), parse_point(term.at("point"))});
        }
    }

    std::optional<campbell::Hole> hole;
    if (has(ctx, "exclusion")) {
        const Ctx h = ctx.at("exclusion");
        reject_unknown(h, {"center", "radius"});
        hole = campbell::Hole{parse_point(h.at("center")), get_double(h.at("radius"))};
    }

    return rethrow_as_config(ctx, [&] {
        return campbell::ShotNoiseScenario(intensity, std::move(pl), std::move(fading),
                                           std::move(terms), hole);
    });
}

sinr::NetworkScenario parse_network(const Ctx& ctx) {
    reject_unknown(ctx, {"bs_intensity", "path_loss", "interferer_fading", "signal_power",
                         "noise_power"});
    const double noise = has(ctx, "noise_power") ? get_double(ctx.at("noise_power")) : 0.0;
    return rethrow_as_config(ctx, [&] {
        return sinr::NetworkScenario(get_double(ctx.at("bs_intensity")),
                                     parse_path_loss(ctx.at("path_loss")),
                                     parse_fading(ctx.at("interferer_fading")),
                                     parse_fading(ctx.at("signal_power")), noise);
    });
}

JobParams parse_job(const Ctx& ctx) {
    reject_unknown(ctx, {"tau", "zeta", "order_n", "epsilon", "max_order", "quadrature",
                         "outer", "mc"});
    JobParams job;
    if (has(ctx, "tau")) job.tau = get_double_array(ctx.at("tau"));
    if (has(ctx, "zeta")) job.zeta = get_double_array(ctx.at("zeta"));
    if (has(ctx, "order_n")) job.order_n = static_cast<int>(get_int(ctx.at("order_n")));
    if (has(ctx, "epsilon")) job.epsilon = get_double(ctx.at("epsilon"));
    if (has(ctx, "max_order")) job.max_order = static_cast<int>(get_int(ctx.at("max_order")));
    if (has(ctx, "quadrature")) {
        const Ctx q = ctx.at("quadrature");
        reject_unknown(q, {"abs_tol", "rel_tol", "max_subdivisions", "tail_truncation_tol"});
        if (has(q, "abs_tol")) job.quadrature.abs_tol = get_double(q.at("abs_tol"));
        if (has(q, "rel_tol")) job.quadrature.rel_tol = get_double(q.at("rel_tol"));
        if (has(q, "max_subdivisions"))
            job.quadrature.max_subdivisions =
                static_cast<int>(get_int(q.at("max_subdivisions")));
        if (has(q, "tail_truncation_tol"))
            job.quadrature.tail_truncation_tol = get_double(q.at("tail_truncation_tol"));
        rethrow_as_config(q, [&] { job.quadrature.validate(); return 0; });
    }
    if (has(ctx, "outer")) {
        const Ctx o = ctx.at("outer");
        reject_unknown(o, {"nodes", "tail_mass"});
        if (has(o, "nodes")) job.outer.nodes = static_cast<int>(get_int(o.at("nodes")));
        if (has(o, "tail_mass")) job.outer.tail_mass = get_double(o.at("tail_mass"));
        rethrow_as_config(o, [&] { job.outer.validate(); return 0; });
    }
    if (has(ctx, "mc")) {
        const Ctx m = ctx.at("mc");
        reject_unknown(m, {"seed", "trials", "truncation_radius"});
        if (has(m, "seed")) {
            const std::int64_t s = get_int(m.at("seed"));
            if (s < 0) fail(m.at("seed"), "seed must be nonnegative");
            job.mc_seed = static_cast<std::uint64_t>(s);
        }
        if (has(m, "trials")) {
            job.mc_trials = get_int(m.at("trials"));
            if (job.mc_trials < 1) fail(m.at("trials"), "trials must be >= 1");
        }
        if (has(m, "truncation_radius")) {
            job.mc_truncation_radius = get_double(m.at("truncation_radius"));
            if (!(*job.mc_truncation_radius > 0.0))
                fail(m.at("truncation_radius"), "truncation radius must be positive");
        }
    }
    return job;
}

json fading_to_json(const dist::FadingModel& m) {
    json out;
    if (const auto* d = m.as_deterministic()) {
        out["type"] = "deterministic";
        out["value"] = d->value;
    } else if (const auto* e = m.as_exponential()) {
        out["type"] = "exponential";
        out["rate"] = e->rate;
    } else if (const auto* g = m.as_erlang()) {
        out["type"] = "erlang";
        out["shape"] = g->shape;
        out["rate"] = g->rate;
    } else {
        const dist::PhaseType& ph = *m.as_phase_type();
        out["type"] = "phase_type";
        json rows = json::array();
        for (int i = 0; i < ph.phases(); ++i) {
            json row = json::array();
            for (int j = 0; j < ph.phases(); ++j) row.push_back(ph.negated_subgenerator()(i, j));
            rows.push_back(std::move(row));
        }
        out["negated_subgenerator"] = std::move(rows);
        json pmf = json::array();
        for (int i = 0; i < ph.phases(); ++i) pmf.push_back(ph.sub_pmf()(i));
        out["sub_pmf"] = std::move(pmf);
    }
    return out;
}

json path_loss_to_json(const campbell::PathLoss& pl) {
    json out;
    if (pl.is_power_law()) {
        out["type"] = "power_law";
        out["k"] = pl.scale();
        out["alpha"] = pl.alpha();
        out["exclusion_radius"] = pl.exclusion_radius();
    } else {
        out["type"] = "bounded_power_law";
        out["k"] = pl.scale();
        out["alpha"] = pl.alpha();
    }
    return out;
}

} // namespace

ScenarioFile parse_scenario(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    const Ctx ctx{root, ""};
    reject_unknown(ctx, {"schema_version", "kind", "model", "job"});

    ScenarioFile file;
    file.schema_version = get_string(ctx.at("schema_version"));
    if (file.schema_version != "1")
        fail(ctx.at("schema_version"), "unsupported schema version");

    const std::string kind = get_string(ctx.at("kind"));
    if (kind == "shot_noise") {
        file.kind = ScenarioFile::Kind::shot_noise;
        file.shot_noise = parse_shot_noise(ctx.at("model"));
    } else if (kind == "network") {
        file.kind = ScenarioFile::Kind::network;
        file.network = parse_network(ctx.at("model"));
    } else {
        fail(ctx.at("kind"), "kind must be 'shot_noise' or 'network'");
    }

    if (has(ctx, "job")) file.job = parse_job(ctx.at("job"));
    return file;
}

ScenarioFile load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

std::string serialize_scenario(const ScenarioFile& file) {
    json root;
    root["schema_version"] = file.schema_version;

    json model;
    if (file.kind == ScenarioFile::Kind::shot_noise) {
        root["kind"] = "shot_noise";
        const campbell::ShotNoiseScenario& sc = *file.shot_noise;
        model["intensity"] = sc.intensity;
        model["path_loss"] = path_loss_to_json(sc.path_loss);
        model["fading"] = fading_to_json(sc.fading);
        json terms = json::array();
        for (const auto& t : sc.combination) {
            json term;
            term["weight"] = t.weight;
            term["point"] = json::array({t.point.x, t.point.y});
            terms.push_back(std::move(term));
        }
        model["combination"] = std::move(terms);
        if (sc.exclusion) {
            json h;
            h["center"] = json::array({sc.exclusion->center.x, sc.exclusion->center.y});
            h["radius"] = sc.exclusion->radius;
            model["exclusion"] = std::move(h);
        }
    } else {
        root["kind"] = "network";
        const sinr::NetworkScenario& net = *file.network;
        model["bs_intensity"] = net.bs_intensity;
        model["path_loss"] = path_loss_to_json(net.path_loss);
        model["interferer_fading"] = fading_to_json(net.interferer_fading);
        model["signal_power"] = fading_to_json(net.signal_power);
        model["noise_power"] = net.noise_power;
    }
    root["model"] = std::move(model);

    json job;
    if (!file.job.tau.empty()) job["tau"] = file.job.tau;
    if (!file.job.zeta.empty()) job["zeta"] = file.job.zeta;
    job["order_n"] = file.job.order_n;
    job["epsilon"] = file.job.epsilon;
    job["max_order"] = file.job.max_order;
    job["quadrature"] = {{"abs_tol", file.job.quadrature.abs_tol},
                         {"rel_tol", file.job.quadrature.rel_tol},
                         {"max_subdivisions", file.job.quadrature.max_subdivisions},
                         {"tail_truncation_tol", file.job.quadrature.tail_truncation_tol}};
    job["outer"] = {{"nodes", file.job.outer.nodes},
                    {"tail_mass", file.job.outer.tail_mass}};
    json mc;
    mc["seed"] = file.job.mc_seed;
    mc["trials"] = file.job.mc_trials;
    if (file.job.mc_truncation_radius) mc["truncation_radius"] = *file.job.mc_truncation_radius;
    job["mc"] = std::move(mc);
    root["job"] = std::move(job);

    return root.dump(2) + "\n";
}

} // namespace mlt::io
