// SPDX-License-Identifier: Apache-2.0
#include "kanlab/basins.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "kanlab/io.hpp"

namespace kanlab {

namespace {

void check_settings(const ClassifySettings& cs) {
    if (cs.window < 1 || cs.max_iter < cs.window) {
        throw std::domain_error("ClassifySettings: max_iter >= window >= 1 required");
    }
    if (!(cs.tol > 0.0) || !(cs.tol < 0.25)) {
        throw std::domain_error("ClassifySettings: tol must lie in (0, 1/4)");
    }
}

double level_dist(FiberKind kind, double t, double level) {
    if (kind == FiberKind::Circle) {
        return circle_dist(CirclePoint(t), CirclePoint(level));
    }
    return std::fabs(t - level);
}

}  // namespace

ClassifyOutcome classify_outcome(const SkewProductSystem& sys, const PhasePoint& x0,
                                 const ClassifySettings& cs) {
    check_settings(cs);
    sys.check_point(x0);
    const auto levels = sys.invariant_levels();
    const FiberKind kind = sys.fiber_kind();
    PhasePoint x = x0;
    int streak0 = 0;
    int streak1 = 0;
    for (int it = 1; it <= cs.max_iter; ++it) {
        x = sys.map(x);
        streak0 = (level_dist(kind, x.fiber, levels[0]) <= cs.tol) ? streak0 + 1 : 0;
        streak1 = (level_dist(kind, x.fiber, levels[1]) <= cs.tol) ? streak1 + 1 : 0;
        if (streak0 >= cs.window) return {BasinLabel::Attractor0, it};
        if (streak1 >= cs.window) return {BasinLabel::Attractor1, it};
    }
    return {BasinLabel::Undecided, cs.max_iter};
}

BasinLabel classify(const SkewProductSystem& sys, const PhasePoint& x0,
                    const ClassifySettings& cs) {
    return classify_outcome(sys, x0, cs).label;
}

PhasePoint slice_point(const SkewProductSystem& sys, const GridSpec& grid, int ix, int iy) {
    const Vec2 c = grid.box.cell_center(ix, iy, grid.nx, grid.ny);
    const bool circle_base = sys.base_kind() == BaseKind::ExpandingCircle;
    switch (grid.slice.axes) {
        case SliceAxes::BaseFirstByFiber:
            if (circle_base) return PhasePoint{CirclePoint(c.x), c.y};
            return PhasePoint{TorusPoint(c.x, grid.slice.fixed), c.y};
        case SliceAxes::BaseSecondByFiber:
            if (circle_base) {
                throw std::domain_error("slice: circle base has a single base coordinate");
            }
            return PhasePoint{TorusPoint(grid.slice.fixed, c.x), c.y};
        case SliceAxes::BasePlane:
            if (circle_base) {
                throw std::domain_error("slice: base plane requires a torus base");
            }
            return PhasePoint{TorusPoint(c.x, c.y), grid.slice.fixed};
    }
    throw std::logic_error("slice_point: unknown slice axes");
}

long long BasinLabelGrid::count(BasinLabel l) const {
    long long n = 0;
    for (BasinLabel v : labels) {
        if (v == l) ++n;
    }
    return n;
}

double BasinLabelGrid::fraction(BasinLabel l) const {
    return static_cast<double>(count(l)) / static_cast<double>(labels.size());
}

BasinLabelGrid basin_map(const SkewProductSystem& sys, const GridSpec& grid,
                         const ClassifySettings& cs, int n_threads) {
    check_settings(cs);
    if (grid.nx < 1 || grid.ny < 1) {
        throw std::domain_error("basin_map: grid resolution must be at least 1 per axis");
    }
    if (grid.box.x_lo() < 0.0 || grid.box.x_hi() > 1.0 || grid.box.y_lo() < 0.0 ||
        grid.box.y_hi() > 1.0) {
        throw std::domain_error("basin_map: grid box must lie inside the fundamental domain [0,1]^2");
    }

    BasinLabelGrid out{grid.box, grid.nx, grid.ny, grid.slice, {}, {}};
    out.labels.assign(static_cast<size_t>(grid.nx) * static_cast<size_t>(grid.ny),
                      BasinLabel::Undecided);
    out.provenance.system = sys.describe();
    out.provenance.system_hash = hex64(fnv1a64(out.provenance.system.dump()));
    out.provenance.settings = cs;

    int workers = n_threads > 0 ? n_threads
                                : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = std::min(workers, grid.ny);

    // Rows are claimed through a shared counter and written by index, so the
    // label matrix does not depend on scheduling.
    std::atomic<int> next_row{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto work = [&]() {
        try {
            for (;;) {
                const int iy = next_row.fetch_add(1);
                if (iy >= grid.ny) return;
                BasinLabel* row = out.labels.data() + static_cast<size_t>(iy) * grid.nx;
                for (int ix = 0; ix < grid.nx; ++ix) {
                    row[ix] = classify_outcome(sys, slice_point(sys, grid, ix, iy), cs).label;
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

std::vector<int> admissible_scales(const BasinLabelGrid& grid) {
    std::vector<int> scales;
    for (int j = 1;; ++j) {
        const long long boxes = 1ll << j;
        if (grid.nx % boxes != 0 || grid.ny % boxes != 0) break;
        if (grid.nx / boxes < 2 || grid.ny / boxes < 2) break;
        scales.push_back(j);
    }
    return scales;
}

MixedBoxCount mixed_box_count(const BasinLabelGrid& grid, int j) {
    if (j < 0) {
        throw std::domain_error("mixed_box_count: scale must be >= 0");
    }
    const long long boxes = 1ll << j;
    if (grid.nx % boxes != 0 || grid.ny % boxes != 0) {
        throw std::domain_error("mixed_box_count: 2^j must divide both grid resolutions");
    }
    const long long bw = grid.nx / boxes;
    const long long bh = grid.ny / boxes;
    if (j > 0 && (bw < 2 || bh < 2)) {
        throw std::domain_error("mixed_box_count: boxes must hold at least 2x2 cells");
    }
    MixedBoxCount out;
    out.total = boxes * boxes;
    for (long long by = 0; by < boxes; ++by) {
        for (long long bx = 0; bx < boxes; ++bx) {
            bool has0 = false;
            bool has1 = false;
            for (long long iy = by * bh; iy < (by + 1) * bh && !(has0 && has1); ++iy) {
                const BasinLabel* row = grid.labels.data() + static_cast<size_t>(iy) * grid.nx;
                for (long long ix = bx * bw; ix < (bx + 1) * bw; ++ix) {
                    has0 |= row[ix] == BasinLabel::Attractor0;
                    has1 |= row[ix] == BasinLabel::Attractor1;
                    if (has0 && has1) break;
                }
            }
            if (has0 && has1) ++out.mixed;
        }
    }
    return out;
}

double intermingling_statistic(const BasinLabelGrid& grid, int j) {
    const auto c = mixed_box_count(grid, j);
    return static_cast<double>(c.mixed) / static_cast<double>(c.total);
}

std::optional<double> boundary_box_dimension(const BasinLabelGrid& grid) {
    if (grid.nx < 256 || grid.ny < 256) return std::nullopt;
    const auto scales = admissible_scales(grid);
    std::vector<int> usable;
    for (int j : scales) {
        if (j >= 2) usable.push_back(j);
    }
    if (usable.size() < 4) return std::nullopt;

    std::vector<double> xs;
    std::vector<double> ys;
    for (int j : usable) {
        const auto c = mixed_box_count(grid, j);
        if (c.mixed > 0) {
            xs.push_back(j * std::log(2.0));
            ys.push_back(std::log(static_cast<double>(c.mixed)));
        }
    }
    if (xs.size() < 2) return std::nullopt;

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return std::clamp(slope, 0.0, 2.0);
}

}  // namespace kanlab
