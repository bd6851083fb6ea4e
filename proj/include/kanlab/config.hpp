// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "kanlab/basins.hpp"
#include "kanlab/ergodic.hpp"
#include "kanlab/experiments.hpp"
#include "kanlab/systems.hpp"

namespace kanlab {

/// Config validation failure; the message names the offending field path.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A fully validated run configuration. Unknown fields anywhere in the
/// document are errors; required fields depend on the operation.
struct RunConfig {
    int schema_version = 1;
    std::string operation;  // validate | lyapunov | basin | intermingle | dimension | toy | sweep
    std::optional<std::string> output_dir;
    std::optional<std::uint64_t> seed;

    std::shared_ptr<const SkewProductSystem> system;

    QuadratureSettings quadrature;
    OrbitSettings orbit;  // seed mirrored from the top-level seed
    ClassifySettings classify;
    GridSpec grid{Box2D(), 512, 512, SliceSpec{}};
    std::vector<int> scales{5};

    std::optional<double> lyapunov_start_level;  // absent: seeded interior point

    PerturbationMode sweep_mode = PerturbationMode::BoundaryPreserving;
    std::vector<double> sweep_etas;
    double sweep_phase = 0.0;

    nlohmann::json raw;  // parsed document, echoed into artifact directories
};

/// Parses and validates a config document. Throws ConfigError with the
/// offending field path on any schema violation.
RunConfig parse_run_config(const nlohmann::json& doc);

/// Reads and parses a config file.
RunConfig load_run_config(const std::string& path);

/// Builds a system from a config "system" object (exposed for tests).
std::shared_ptr<const SkewProductSystem> system_from_json(const nlohmann::json& doc,
                                                          const std::string& path_prefix);

/// Human-readable schema of the config format, printed by `kanlab schema`.
std::string config_schema_text();

}  // namespace kanlab
