// Copyright 2026 the mlt authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mlt/campbell.hpp"
#include "mlt/sinr.hpp"

namespace mlt::io {

/// Grid and solver parameters carried alongside a scenario. Every field has
/// a default; files may omit any of them and the CLI may override them.
struct JobParams {
    std::vector<double> tau;
    std::vector<double> zeta;
    int order_n = 64;
    double epsilon = 1e-3;
    int max_order = 2;
    campbell::QuadratureConfig quadrature;
    sinr::OuterQuadrature outer;
    std::uint64_t mc_seed = 1;
    std::int64_t mc_trials = 100000;
    std::optional<double> mc_truncation_radius;
};

/// A parsed scenario file. Exactly one of shot_noise / network is set,
/// matching kind. Loading rejects unknown keys and validates every physical
/// parameter; serialization is canonical (alphabetical keys, normalized
/// model forms), so load-serialize round-trips are value identical.
struct ScenarioFile {
    enum class Kind { shot_noise, network };

    std::string schema_version = "1";
    Kind kind = Kind::shot_noise;
    std::optional<campbell::ShotNoiseScenario> shot_noise;
    std::optional<sinr::NetworkScenario> network;
    JobParams job;
};

ScenarioFile parse_scenario(const std::string& json_text);
ScenarioFile load_scenario_file(const std::string& path);
std::string serialize_scenario(const ScenarioFile& file);

} // namespace mlt::io
