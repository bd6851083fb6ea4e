// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "kanlab/systems.hpp"

namespace kanlab {

enum class BasinLabel : unsigned char {
    Attractor0 = 0,  // fiber level 0
    Attractor1 = 1,  // fiber level 1 (interval fiber) or 1/2 (circle fiber)
    Undecided = 2,
};

struct ClassifySettings {
    int max_iter = 10'000;
    double tol = 1e-3;    // fiber distance to the attracting level
    int window = 10;      // consecutive in-tolerance iterates required
};

struct ClassifyOutcome {
    BasinLabel label = BasinLabel::Undecided;
    int decided_at = 0;  // iterate index of the decision; max_iter if undecided
};

/// Attractor membership by fiber-coordinate convergence: Attractor0 once the
/// fiber stays within tol of level 0 for `window` consecutive iterates, and
/// similarly Attractor1. Deterministic.
ClassifyOutcome classify_outcome(const SkewProductSystem& sys, const PhasePoint& x0,
                                 const ClassifySettings& cs);
BasinLabel classify(const SkewProductSystem& sys, const PhasePoint& x0,
                    const ClassifySettings& cs);

/// How grid coordinates (x, y) embed into the phase space.
enum class SliceAxes {
    BaseFirstByFiber,   // x -> first base coordinate, y -> fiber; `fixed` holds the second base coordinate
    BaseSecondByFiber,  // x -> second base coordinate, y -> fiber; `fixed` holds the first
    BasePlane,          // (x, y) -> base plane; `fixed` holds the fiber level
};

struct SliceSpec {
    SliceAxes axes = SliceAxes::BaseFirstByFiber;
    double fixed = 0.0;
};

struct GridSpec {
    Box2D box;
    int nx = 512;
    int ny = 512;
    SliceSpec slice;
};

/// Phase point of grid cell (ix, iy) under the slice embedding.
PhasePoint slice_point(const SkewProductSystem& sys, const GridSpec& grid, int ix, int iy);

/// Label matrix over a grid of initial conditions, with provenance.
struct BasinLabelGrid {
    Box2D box;
    int nx = 0;
    int ny = 0;
    SliceSpec slice;
    std::vector<BasinLabel> labels;  // row-major, x varies fastest

    struct Provenance {
        nlohmann::json system;
        std::string system_hash;  // fnv1a-64 of the system description
        ClassifySettings settings;
        std::uint64_t seed = 0;
    } provenance;

    BasinLabel at(int ix, int iy) const { return labels[static_cast<size_t>(iy) * nx + ix]; }
    long long count(BasinLabel l) const;
    double fraction(BasinLabel l) const;
};

/// Classifies every cell center of the grid. Data-parallel over rows; the
/// result is independent of worker count and scheduling.
BasinLabelGrid basin_map(const SkewProductSystem& sys, const GridSpec& grid,
                         const ClassifySettings& cs, int n_threads = 0);

/// Scales j at which the dyadic-box statistics are defined: 2^j divides both
/// resolutions and every box holds at least a 2x2 block of cells.
std::vector<int> admissible_scales(const BasinLabelGrid& grid);

struct MixedBoxCount {
    long long mixed = 0;
    long long total = 0;
};

/// Dyadic boxes at scale 2^-j (relative to the grid box) containing at least
/// one cell of each attractor label.
MixedBoxCount mixed_box_count(const BasinLabelGrid& grid, int j);

/// Fraction of dyadic boxes at scale 2^-j witnessing both basins; 1.0 means
/// every box at that scale meets both. Finite-scale evidence only.
double intermingling_statistic(const BasinLabelGrid& grid, int j);

/// Box-counting estimate of the basin-boundary dimension: least-squares slope
/// of log N(j) against j*log 2 over scales j = 2..j_max, where N(j) counts
/// mixed boxes. Returns nullopt for degenerate grids (resolution below 256,
/// fewer than 4 usable scales, or fewer than 2 scales with mixed boxes).
std::optional<double> boundary_box_dimension(const BasinLabelGrid& grid);

}  // namespace kanlab
