// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kanlab/basins.hpp"
#include "kanlab/ergodic.hpp"

namespace kanlab {

enum class PerturbationMode {
    BoundaryPreserving,  // adds eta * t(1-t) * sin(2 pi (theta + a)) to an interval-fiber map
    FiberRotation,       // adds the constant eta (mod 1) to a circle-fiber map
};

struct Perturbation {
    PerturbationMode mode = PerturbationMode::BoundaryPreserving;
    double eta = 0.0;
    double phase = 0.0;
};

/// Wraps a system with a fiber perturbation. Admissibility (mode compatible
/// with the fiber geometry; perturbed fiber map still an increasing bijection
/// into its domain) is checked at construction by sampling; inadmissible
/// perturbations raise std::domain_error. eta = 0 reproduces the inner map
/// values bit-for-bit.
std::shared_ptr<const SkewProductSystem> perturb(
    std::shared_ptr<const SkewProductSystem> sys, const Perturbation& p);

const char* perturbation_mode_name(PerturbationMode mode);

/// "0p0200"-style tag: eta at 4 decimal places, 'p' as the decimal separator.
std::string eta_filename_tag(double eta);

nlohmann::json lyapunov_to_json(const LyapunovEstimate& est);

// ---------------------------------------------------------------------------

struct ToyExperimentSettings {
    GridSpec grid{Box2D(0.0, 0.0, 1.0, 1.0), 256, 256, SliceSpec{SliceAxes::BaseFirstByFiber, 0.0}};
    ClassifySettings classify;
    OrbitSettings orbit;
    QuadratureSettings quadrature;
    int threads = 0;
};

struct ToyExperimentReport {
    ConditionReport conditions;
    double frac_attractor0 = 0.0;
    double frac_attractor1 = 0.0;
    double frac_undecided = 0.0;
    LyapunovEstimate sink_center;       // orbit started on the sink circle
    bool repeller_adjacent_attracted = false;  // rows next to t = 0 all classify Attractor1
    BasinLabelGrid grid;
    double wall_clock_sec = 0.0;

    nlohmann::json to_json() const;
};

/// Packaged run over the product system: validator verdicts, basin fractions
/// on a slice, the center exponent on the sink circle, and the check that the
/// repelling circle lies in the closure of the attractor's basin.
ToyExperimentReport run_toy_experiment(const ToySystem& sys, const ToyExperimentSettings& s);

// ---------------------------------------------------------------------------

struct SweepSettings {
    PerturbationMode mode = PerturbationMode::BoundaryPreserving;
    std::vector<double> etas{0.0};  // ascending, starting at 0
    double phase = 0.0;
    GridSpec grid{Box2D(0.0, 0.0, 1.0, 1.0), 512, 512, SliceSpec{SliceAxes::BaseFirstByFiber, 0.0}};
    ClassifySettings classify;
    OrbitSettings orbit{1000, 100'000, 0};
    QuadratureSettings quadrature;
    std::vector<int> scales{5};
    int threads = 0;
};

struct SweepRow {
    double eta = 0.0;
    bool conditions_pass = false;
    ConditionReport conditions;
    double frac_attractor0 = 0.0;
    double frac_attractor1 = 0.0;
    double frac_undecided = 0.0;
    double majority_fraction = 0.0;  // largest of the three label fractions
    std::map<int, double> statistic;  // scale j -> mixed-box fraction
    std::optional<double> dimension;
    LyapunovEstimate center;
    BasinLabelGrid grid;
};

struct SweepReport {
    std::string mode;
    std::uint64_t seed = 0;
    std::vector<SweepRow> rows;
    double wall_clock_sec = 0.0;

    nlohmann::json to_json() const;
    std::string csv() const;
};

/// One row per eta: re-validated conditions, basin fractions, intermingling
/// statistics at the configured scales, a center-exponent estimate from a
/// seeded interior point, and the dimension estimate when the grid admits it.
/// Observed values are recorded, not asserted.
SweepReport run_robustness_sweep(std::shared_ptr<const SkewProductSystem> sys,
                                 const SweepSettings& s);

}  // namespace kanlab
