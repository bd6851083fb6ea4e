// SPDX-License-Identifier: Apache-2.0
#include "kanlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "kanlab/io.hpp"
#include "kanlab/rng.hpp"

namespace kanlab {

namespace {

class PerturbedSystem final : public SkewProductSystem {
public:
    PerturbedSystem(std::shared_ptr<const SkewProductSystem> inner, const Perturbation& p)
        : inner_(std::move(inner)), p_(p) {
        if (!inner_) {
            throw std::domain_error("perturb: null system");
        }
        if (!(p_.eta >= 0.0) || !std::isfinite(p_.eta) || !std::isfinite(p_.phase)) {
            throw std::domain_error("perturb: eta must be finite and >= 0");
        }
        if (p_.mode == PerturbationMode::BoundaryPreserving &&
            inner_->fiber_kind() != FiberKind::Interval) {
            throw std::domain_error(
                "perturb: boundary-preserving perturbations require an interval fiber");
        }
        if (p_.mode == PerturbationMode::FiberRotation &&
            inner_->fiber_kind() != FiberKind::Circle) {
            throw std::domain_error("perturb: fiber rotations require a circle fiber");
        }
        check_admissible();
    }

    BasePoint base_map(const BasePoint& b) const override { return inner_->base_map(b); }

    double fiber_map(const BasePoint& b, double t) const override {
        if (p_.mode == PerturbationMode::FiberRotation) {
            return wrap_unit(inner_->fiber_map(b, t) + p_.eta);
        }
        return inner_->fiber_map(b, t) +
               p_.eta * t * (1.0 - t) * sin_two_pi(first_base_coord(b) + p_.phase);
    }

    double fiber_derivative(const BasePoint& b, double t) const override {
        if (p_.mode == PerturbationMode::FiberRotation) {
            return inner_->fiber_derivative(b, t);
        }
        return inner_->fiber_derivative(b, t) +
               p_.eta * (1.0 - 2.0 * t) * sin_two_pi(first_base_coord(b) + p_.phase);
    }

    BaseKind base_kind() const override { return inner_->base_kind(); }
    FiberKind fiber_kind() const override { return inner_->fiber_kind(); }
    ConditionFamily condition_family() const override { return inner_->condition_family(); }
    std::array<double, 2> invariant_levels() const override { return inner_->invariant_levels(); }
    std::optional<std::pair<BasePoint, BasePoint>> marked_base_points() const override {
        return inner_->marked_base_points();
    }
    std::vector<BasePoint> base_fixed_points() const override {
        return inner_->base_fixed_points();
    }
    BaseSpectrum base_spectrum() const override { return inner_->base_spectrum(); }
    DominationBounds domination_bounds() const override { return inner_->domination_bounds(); }
    const Mat2i* torus_matrix() const override { return inner_->torus_matrix(); }

    nlohmann::json describe() const override {
        return {{"perturbation",
                 {{"mode", perturbation_mode_name(p_.mode)}, {"eta", p_.eta}, {"phase", p_.phase}}},
                {"system", inner_->describe()}};
    }

private:
    static double first_base_coord(const BasePoint& b) {
        if (const auto* c = std::get_if<CirclePoint>(&b)) return c->value();
        return std::get<TorusPoint>(b).u.value();
    }

    /// Samples the perturbed fiber map and derivative over a base-by-fiber
    /// grid; the map must stay inside the fiber domain and stay increasing.
    void check_admissible() const {
        if (p_.mode == PerturbationMode::FiberRotation) {
            return;  // rotation preserves monotonicity and the circle domain
        }
        std::vector<BasePoint> bases;
        if (inner_->base_kind() == BaseKind::ExpandingCircle) {
            for (int i = 0; i < 257; ++i) bases.emplace_back(CirclePoint(i / 257.0));
        } else {
            for (int i = 0; i < 65; ++i) {
                for (int j = 0; j < 65; ++j) {
                    bases.emplace_back(TorusPoint(i / 65.0, j / 65.0));
                }
            }
        }
        if (auto mk = inner_->marked_base_points()) {
            bases.push_back(mk->first);
            bases.push_back(mk->second);
        }
        for (const auto& b : bases) {
            for (int i = 0; i <= 128; ++i) {
                const double t = i / 128.0;
                const double v = fiber_map(b, t);
                if (!(v >= 0.0) || !(v <= 1.0)) {
                    throw std::domain_error(
                        "perturb: eta too large, perturbed fiber map leaves [0,1]");
                }
                if (!(fiber_derivative(b, t) > 0.0)) {
                    throw std::domain_error(
                        "perturb: eta too large, perturbed fiber map is not increasing");
                }
            }
        }
    }

    std::shared_ptr<const SkewProductSystem> inner_;
    Perturbation p_;
};

double wall_seconds(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::shared_ptr<const SkewProductSystem> perturb(std::shared_ptr<const SkewProductSystem> sys,
                                                 const Perturbation& p) {
    return std::make_shared<PerturbedSystem>(std::move(sys), p);
}

const char* perturbation_mode_name(PerturbationMode mode) {
    return mode == PerturbationMode::BoundaryPreserving ? "boundary_preserving"
                                                        : "fiber_rotation";
}

std::string eta_filename_tag(double eta) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", eta);
    std::string s(buf);
    const auto dot = s.find('.');
    if (dot != std::string::npos) s[dot] = 'p';
    return s;
}

nlohmann::json lyapunov_to_json(const LyapunovEstimate& est) {
    nlohmann::json out = {{"center", est.center},
                          {"base_unstable", est.base_unstable},
                          {"n_used", est.n_used},
                          {"standard_error", est.standard_error},
                          {"seed", est.seed}};
    if (est.base_stable) {
        out["base_stable"] = *est.base_stable;
    } else {
        out["base_stable"] = nullptr;
    }
    return out;
}

// ---------------------------------------------------------------------------

nlohmann::json ToyExperimentReport::to_json() const {
    return {{"experiment", "toy"},
            {"conditions", conditions.to_json()},
            {"fractions",
             {{"attractor0", frac_attractor0},
              {"attractor1", frac_attractor1},
              {"undecided", frac_undecided}}},
            {"sink_center_exponent", lyapunov_to_json(sink_center)},
            {"repeller_adjacent_attracted", repeller_adjacent_attracted},
            {"grid",
             {{"nx", grid.nx}, {"ny", grid.ny}, {"system_hash", grid.provenance.system_hash}}},
            {"wall_clock_sec", wall_clock_sec}};
}

ToyExperimentReport run_toy_experiment(const ToySystem& sys, const ToyExperimentSettings& s) {
    const auto t0 = std::chrono::steady_clock::now();
    ToyExperimentReport report{validate_conditions(sys, s.quadrature),
                               0.0,
                               0.0,
                               0.0,
                               {},
                               false,
                               basin_map(sys, s.grid, s.classify, s.threads),
                               0.0};
    report.grid.provenance.seed = s.orbit.seed;

    const auto& grid = report.grid;
    report.frac_attractor0 = grid.fraction(BasinLabel::Attractor0);
    report.frac_attractor1 = grid.fraction(BasinLabel::Attractor1);
    report.frac_undecided = grid.fraction(BasinLabel::Undecided);

    // Cells adjacent to the repelling circle t = 0: the bottom grid row and,
    // the fiber being a circle, the top row as well.
    bool adjacent_ok = true;
    for (int ix = 0; ix < grid.nx; ++ix) {
        adjacent_ok &= grid.at(ix, 0) == BasinLabel::Attractor1;
        adjacent_ok &= grid.at(ix, grid.ny - 1) == BasinLabel::Attractor1;
    }
    report.repeller_adjacent_attracted = adjacent_ok;

    // Constant orbit on the sink circle: the estimate is log|xi'(1/2)| exactly.
    const double sink_level = sys.invariant_levels()[1];
    report.sink_center =
        center_lyapunov(sys, random_point_on_level(sys, sink_level, s.orbit.seed), s.orbit);

    report.wall_clock_sec = wall_seconds(t0);
    return report;
}

// ---------------------------------------------------------------------------

nlohmann::json SweepReport::to_json() const {
    nlohmann::json rows_json = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json stat = nlohmann::json::object();
        for (const auto& [j, v] : row.statistic) {
            stat["j" + std::to_string(j)] = v;
        }
        nlohmann::json item = {{"eta", row.eta},
                               {"conditions_pass", row.conditions_pass},
                               {"conditions", row.conditions.to_json()},
                               {"fractions",
                                {{"attractor0", row.frac_attractor0},
                                 {"attractor1", row.frac_attractor1},
                                 {"undecided", row.frac_undecided}}},
                               {"majority_fraction", row.majority_fraction},
                               {"statistic", stat},
                               {"center", lyapunov_to_json(row.center)}};
        item["dimension"] = row.dimension ? nlohmann::json(*row.dimension) : nlohmann::json();
        rows_json.push_back(item);
    }
    return {{"experiment", "sweep"},
            {"mode", mode},
            {"seed", seed},
            {"rows", rows_json},
            {"wall_clock_sec", wall_clock_sec}};
}

std::string SweepReport::csv() const {
    std::string out = "eta,conditions_pass,frac_attractor0,frac_attractor1,frac_undecided,"
                      "majority_fraction";
    if (!rows.empty()) {
        for (const auto& [j, v] : rows.front().statistic) {
            out += ",stat_j" + std::to_string(j);
        }
    }
    out += ",center_exponent,center_stderr,box_dimension\n";
    for (const auto& row : rows) {
        out += format_double(row.eta, "%.4f");
        out += row.conditions_pass ? ",1" : ",0";
        out += "," + format_double(row.frac_attractor0, "%.6f");
        out += "," + format_double(row.frac_attractor1, "%.6f");
        out += "," + format_double(row.frac_undecided, "%.6f");
        out += "," + format_double(row.majority_fraction, "%.6f");
        for (const auto& [j, v] : row.statistic) {
            out += "," + format_double(v, "%.6f");
        }
        out += "," + format_double(row.center.center);
        out += "," + format_double(row.center.standard_error);
        out += ",";
        if (row.dimension) out += format_double(*row.dimension);
        out += "\n";
    }
    return out;
}

SweepReport run_robustness_sweep(std::shared_ptr<const SkewProductSystem> sys,
                                 const SweepSettings& s) {
    if (s.etas.empty() || s.etas.front() != 0.0 ||
        !std::is_sorted(s.etas.begin(), s.etas.end())) {
        throw std::domain_error("run_robustness_sweep: etas must be ascending and start at 0");
    }
    const auto t0 = std::chrono::steady_clock::now();
    SweepReport report;
    report.mode = perturbation_mode_name(s.mode);
    report.seed = s.orbit.seed;

    for (size_t i = 0; i < s.etas.size(); ++i) {
        const double eta = s.etas[i];
        auto sys_eta = perturb(sys, Perturbation{s.mode, eta, s.phase});

        SweepRow row;
        row.eta = eta;
        row.conditions = validate_conditions(*sys_eta, s.quadrature);
        row.conditions_pass = row.conditions.all_pass();
        row.grid = basin_map(*sys_eta, s.grid, s.classify, s.threads);
        row.grid.provenance.seed = s.orbit.seed;
        row.frac_attractor0 = row.grid.fraction(BasinLabel::Attractor0);
        row.frac_attractor1 = row.grid.fraction(BasinLabel::Attractor1);
        row.frac_undecided = row.grid.fraction(BasinLabel::Undecided);
        row.majority_fraction = std::max({row.frac_attractor0, row.frac_attractor1,
                                          row.frac_undecided});
        for (int j : s.scales) {
            row.statistic[j] = intermingling_statistic(row.grid, j);
        }
        row.dimension = boundary_box_dimension(row.grid);

        // Seeds shard deterministically by row index.
        OrbitSettings orbit = s.orbit;
        orbit.seed = SplitMix64(s.orbit.seed).fork(i).next();
        row.center = center_lyapunov(*sys_eta, random_phase_point(*sys_eta, orbit.seed), orbit);

        report.rows.push_back(std::move(row));
    }
    report.wall_clock_sec = wall_seconds(t0);
    return report;
}

}  // namespace kanlab
