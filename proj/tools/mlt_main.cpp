// Copyright 2026 the mlt authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
//
// Batch front end: loads a scenario file, dispatches analytic and Monte Carlo
// computations, and writes machine-readable CSV plus an optional JSON summary.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mlt/oracle.hpp"
#include "mlt/parallel.hpp"
#include "mlt/scenario.hpp"
#include "mlt/shotnoise_stats.hpp"
#include "mlt/sinr.hpp"

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt(std::int64_t v) { return std::to_string(v); }

struct OutputSink {
    std::string csv_path;  // empty: stdout
    std::string json_path; // empty: no summary

    void write_csv(const std::string& text) const {
        if (csv_path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) throw mlt::ConfigError("cannot write output file '" + csv_path + "'");
        out << text;
    }

    void write_json(const json& summary) const {
        if (json_path.empty()) return;
        std::ofstream out(json_path, std::ios::binary);
        if (!out) throw mlt::ConfigError("cannot write summary file '" + json_path + "'");
        out << summary.dump(2) << "\n";
    }
};

std::vector<double> parse_grid(const std::string& text, const char* flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw mlt::ConfigError("invalid number '" + item + "' in " + flag);
        }
    }
    if (out.empty()) throw mlt::ConfigError(std::string("empty grid for ") + flag);
    return out;
}

json job_metadata(const mlt::io::ScenarioFile& file) {
    json meta;
    meta["order_n"] = file.job.order_n;
    meta["epsilon"] = file.job.epsilon;
    meta["max_order"] = file.job.max_order;
    meta["quadrature"] = {
        {"abs_tol", file.job.quadrature.abs_tol},
        {"rel_tol", file.job.quadrature.rel_tol},
        {"max_subdivisions", file.job.quadrature.max_subdivisions},
        {"tail_truncation_tol", file.job.quadrature.tail_truncation_tol}};
    meta["outer"] = {{"nodes", file.job.outer.nodes},
                     {"tail_mass", file.job.outer.tail_mass}};
    meta["mc"] = {{"seed", file.job.mc_seed}, {"trials", file.job.mc_trials}};
    if (file.job.mc_truncation_radius)
        meta["mc"]["truncation_radius"] = *file.job.mc_truncation_radius;
    return meta;
}

json summary_skeleton(const std::string& command, const mlt::io::ScenarioFile& file) {
    json summary;
    summary["command"] = command;
    summary["config"] = json::parse(mlt::io::serialize_scenario(file));
    summary["parameters"] = job_metadata(file);
    return summary;
}

const mlt::campbell::ShotNoiseScenario& need_shot_noise(const mlt::io::ScenarioFile& f) {
    if (!f.shot_noise)
        throw mlt::ConfigError("this subcommand needs a 'shot_noise' scenario", "/kind");
    return *f.shot_noise;
}

const mlt::sinr::NetworkScenario& need_network(const mlt::io::ScenarioFile& f) {
    if (!f.network)
        throw mlt::ConfigError("this subcommand needs a 'network' scenario", "/kind");
    return *f.network;
}

mlt::oracle::McConfig mc_config(const mlt::io::ScenarioFile& file) {
    mlt::oracle::McConfig mc;
    mc.seed = file.job.mc_seed;
    mc.trials = file.job.mc_trials;
    if (file.job.mc_truncation_radius) {
        mc.truncation_radius = *file.job.mc_truncation_radius;
    } else if (file.shot_noise) {
        mc.truncation_radius = mlt::oracle::choose_truncation_radius(*file.shot_noise);
    } else {
        mc.truncation_radius = 25.0 / std::sqrt(file.network->bs_intensity);
    }
    return mc;
}

int run_moments(const mlt::io::ScenarioFile& file, const OutputSink& sink) {
    const auto& sc = need_shot_noise(file);
    const std::vector<double> values =
        mlt::stats::moments(sc, file.job.max_order, file.job.quadrature);

    std::string csv = "order,value\n";
    for (std::size_t k = 0; k < values.size(); ++k)
        csv += std::to_string(k) + "," + fmt(values[k]) + "\n";
    sink.write_csv(csv);

    json summary = summary_skeleton("moments", file);
    summary["results"] = values;
    sink.write_json(summary);
    return 0;
}

int run_ccdf(const mlt::io::ScenarioFile& file, const OutputSink& sink) {
    const auto& sc = need_shot_noise(file);
    if (file.job.tau.empty()) throw mlt::ConfigError("ccdf needs a tau grid", "/job/tau");

    std::vector<mlt::stats::CcdfApproxResult> rows(file.job.tau.size());
    mlt::parallel_for(file.job.tau.size(), [&](std::size_t i) {
        rows[i] = mlt::stats::shot_noise_ccdf(sc, file.job.tau[i], file.job.order_n,
                                              file.job.epsilon, file.job.quadrature);
    });

    std::string csv = "tau,value,lower,upper,delta\n";
    json results = json::array();
    for (const auto& r : rows) {
        csv += fmt(r.tau) + "," + fmt(r.value) + "," + fmt(r.lower_bound) + "," +
               fmt(r.upper_bound) + "," + fmt(r.delta) + "\n";
        results.push_back({{"tau", r.tau},
                           {"value", r.value},
                           {"lower", r.lower_bound},
                           {"upper", r.upper_bound},
                           {"delta", r.delta},
                           {"epsilon", r.epsilon},
                           {"order_n", r.order_n}});
    }
    sink.write_csv(csv);

    json summary = summary_skeleton("ccdf", file);
    summary["results"] = std::move(results);
    sink.write_json(summary);
    return 0;
}

int run_coverage(const mlt::io::ScenarioFile& file, const OutputSink& sink) {
    const auto& net = need_network(file);
    if (file.job.tau.empty()) throw mlt::ConfigError("coverage needs a tau grid", "/job/tau");

    const mlt::sinr::CoverageCurve curve =
        mlt::sinr::coverage_curve(net, file.job.tau, file.job.outer, file.job.quadrature);

    std::string csv = "tau,value\n";
    for (std::size_t i = 0; i < curve.thresholds.size(); ++i)
        csv += fmt(curve.thresholds[i]) + "," + fmt(curve.probabilities[i]) + "\n";
    sink.write_csv(csv);

    json summary = summary_skeleton("coverage", file);
    summary["results"] = curve.probabilities;
    summary["diagnostics"] = curve.diagnostics;
    sink.write_json(summary);
    return 0;
}

int run_metadist(const mlt::io::ScenarioFile& file, const OutputSink& sink) {
    const auto& net = need_network(file);
    if (file.job.tau.empty()) throw mlt::ConfigError("metadist needs tau", "/job/tau");
    if (file.job.zeta.empty()) throw mlt::ConfigError("metadist needs a zeta grid", "/job/zeta");

    const std::vector<double> values = mlt::sinr::meta_distribution_grid(
        net, file.job.tau[0], file.job.zeta, file.job.order_n, file.job.outer,
        file.job.quadrature);

    std::string csv = "zeta,value\n";
    for (std::size_t i = 0; i < values.size(); ++i)
        csv += fmt(file.job.zeta[i]) + "," + fmt(values[i]) + "\n";
    sink.write_csv(csv);

    json summary = summary_skeleton("metadist", file);
    summary["results"] = values;
    summary["tau"] = file.job.tau[0];
    sink.write_json(summary);
    return 0;
}

int run_mc(const mlt::io::ScenarioFile& file, const OutputSink& sink) {
    const mlt::oracle::McConfig mc = mc_config(file);
    json summary = summary_skeleton("mc", file);
    summary["mc"] = {{"seed", mc.seed},
                     {"trials", mc.trials},
                     {"truncation_radius", mc.truncation_radius}};

    if (file.shot_noise) {
        if (file.job.tau.empty()) throw mlt::ConfigError("mc needs a tau grid", "/job/tau");
        const std::vector<mlt::oracle::EstimateWithCi> est =
            mlt::oracle::estimate_shot_noise_ccdf(*file.shot_noise, file.job.tau, mc);
        std::string csv = "tau,mean,stderr,trials\n";
        json results = json::array();
        for (std::size_t i = 0; i < est.size(); ++i) {
            csv += fmt(file.job.tau[i]) + "," + fmt(est[i].mean) + "," +
                   fmt(est[i].std_error) + "," + fmt(est[i].trials) + "\n";
            results.push_back({{"tau", file.job.tau[i]},
                               {"mean", est[i].mean},
                               {"stderr", est[i].std_error}});
        }
        sink.write_csv(csv);
        summary["results"] = std::move(results);
        sink.write_json(summary);
        return 0;
    }

    const auto& net = need_network(file);
    if (file.job.tau.empty()) throw mlt::ConfigError("mc needs tau", "/job/tau");
    std::string csv = "metric,arg,mean,stderr,trials\n";
    json results = json::array();
    for (double tau : file.job.tau) {
        const auto [coverage, meta] =
            mlt::oracle::estimate_coverage_and_meta(net, tau, file.job.zeta, mc);
        csv += "coverage," + fmt(tau) + "," + fmt(coverage.mean) + "," +
               fmt(coverage.std_error) + "," + fmt(coverage.trials) + "\n";
        results.push_back({{"metric", "coverage"},
                           {"tau", tau},
                           {"mean", coverage.mean},
                           {"stderr", coverage.std_error}});
        for (std::size_t i = 0; i < meta.size(); ++i) {
            csv += "meta," + fmt(file.job.zeta[i]) + "," + fmt(meta[i].mean) + "," +
                   fmt(meta[i].std_error) + "," + fmt(meta[i].trials) + "\n";
            results.push_back({{"metric", "meta"},
                               {"tau", tau},
                               {"zeta", file.job.zeta[i]},
                               {"mean", meta[i].mean},
                               {"stderr", meta[i].std_error}});
        }
    }
    sink.write_csv(csv);
    summary["results"] = std::move(results);
    sink.write_json(summary);
    return 0;
}

int run_compare(const mlt::io::ScenarioFile& file, const OutputSink& sink) {
    if (file.job.tau.empty()) throw mlt::ConfigError("compare needs tau", "/job/tau");
    const double tau = file.job.tau[0];
    const mlt::oracle::McConfig mc = mc_config(file);

    json out;
    out["tau"] = tau;
    out["seed"] = mc.seed;
    out["trials"] = mc.trials;

    double analytic = 0.0;
    mlt::oracle::EstimateWithCi est;
    if (file.shot_noise) {
        out["metric"] = "ccdf";
        out["order_n"] = file.job.order_n;
        analytic = mlt::stats::shot_noise_ccdf(*file.shot_noise, tau, file.job.order_n,
                                               file.job.epsilon, file.job.quadrature)
                       .value;
        est = mlt::oracle::estimate_shot_noise_ccdf(*file.shot_noise, {tau}, mc)[0];
    } else {
        out["metric"] = "coverage";
        const auto& net = need_network(file);
        analytic =
            mlt::sinr::coverage_probability(net, tau, file.job.outer, file.job.quadrature);
        est = mlt::oracle::estimate_coverage_and_meta(net, tau, {}, mc).first;
    }

    const double denom = est.std_error > 0.0 ? est.std_error : 1e-300;
    out["analytic"] = analytic;
    out["mc_mean"] = est.mean;
    out["mc_stderr"] = est.std_error;
    out["z_score"] = std::abs(analytic - est.mean) / denom;

    const std::string text = out.dump(2) + "\n";
    sink.write_csv(text); // compare's primary output is the JSON report
    json summary = summary_skeleton("compare", file);
    summary["results"] = std::move(out);
    sink.write_json(summary);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"matrix Laplace transform analytics for Poisson shot noise and SINR"};
    app.require_subcommand(1);

    std::string config_path, out_path, json_path, tau_text, zeta_text;
    long long order_n = -1, max_order = -1, trials = -1, seed = -1;
    double epsilon = -1.0, radius = -1.0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "scenario JSON file")->required();
        cmd->add_option("--out", out_path, "CSV output file (default: stdout)");
        cmd->add_option("--json", json_path, "JSON summary output file");
    };

    CLI::App* cmd_moments = app.add_subcommand("moments", "shot-noise moments");
    add_common(cmd_moments);
    cmd_moments->add_option("--max-order", max_order, "highest moment order");

    CLI::App* cmd_ccdf = app.add_subcommand("ccdf", "shot-noise CCDF with bounds");
    add_common(cmd_ccdf);
    cmd_ccdf->add_option("--tau", tau_text, "comma-separated thresholds");
    cmd_ccdf->add_option("--order", order_n, "Erlang smoothing order N");
    cmd_ccdf->add_option("--epsilon", epsilon, "bound confidence parameter");

    CLI::App* cmd_cov = app.add_subcommand("coverage", "SINR coverage probability");
    add_common(cmd_cov);
    cmd_cov->add_option("--tau", tau_text, "comma-separated SINR thresholds");

    CLI::App* cmd_meta = app.add_subcommand("metadist", "SINR meta-distribution");
    add_common(cmd_meta);
    cmd_meta->add_option("--tau", tau_text, "SINR threshold");
    cmd_meta->add_option("--zeta", zeta_text, "comma-separated reliability levels");
    cmd_meta->add_option("--order", order_n, "approximation order N");

    CLI::App* cmd_mc = app.add_subcommand("mc", "Monte Carlo estimates");
    add_common(cmd_mc);
    cmd_mc->add_option("--tau", tau_text, "comma-separated thresholds");
    cmd_mc->add_option("--zeta", zeta_text, "comma-separated reliability levels");
    cmd_mc->add_option("--trials", trials, "number of trials");
    cmd_mc->add_option("--seed", seed, "RNG seed");
    cmd_mc->add_option("--radius", radius, "simulation truncation radius");

    CLI::App* cmd_cmp = app.add_subcommand("compare", "analytic vs Monte Carlo");
    add_common(cmd_cmp);
    cmd_cmp->add_option("--tau", tau_text, "threshold");
    cmd_cmp->add_option("--order", order_n, "Erlang smoothing order N");
    cmd_cmp->add_option("--epsilon", epsilon, "bound confidence parameter");
    cmd_cmp->add_option("--trials", trials, "number of trials");
    cmd_cmp->add_option("--seed", seed, "RNG seed");
    cmd_cmp->add_option("--radius", radius, "simulation truncation radius");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        mlt::io::ScenarioFile file = mlt::io::load_scenario_file(config_path);
        if (!tau_text.empty()) file.job.tau = parse_grid(tau_text, "--tau");
        if (!zeta_text.empty()) file.job.zeta = parse_grid(zeta_text, "--zeta");
        if (order_n > 0) file.job.order_n = static_cast<int>(order_n);
        if (max_order >= 0) file.job.max_order = static_cast<int>(max_order);
        if (epsilon > 0.0) file.job.epsilon = epsilon;
        if (trials > 0) file.job.mc_trials = trials;
        if (seed >= 0) file.job.mc_seed = static_cast<std::uint64_t>(seed);
        if (radius > 0.0) file.job.mc_truncation_radius = radius;

        const OutputSink sink{out_path, json_path};
        if (app.got_subcommand(cmd_moments)) return run_moments(file, sink);
        if (app.got_subcommand(cmd_ccdf)) return run_ccdf(file, sink);
        if (app.got_subcommand(cmd_cov)) return run_coverage(file, sink);
        if (app.got_subcommand(cmd_meta)) return run_metadist(file, sink);
        if (app.got_subcommand(cmd_mc)) return run_mc(file, sink);
        if (app.got_subcommand(cmd_cmp)) return run_compare(file, sink);
        return 2;
    } catch (const mlt::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const mlt::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
