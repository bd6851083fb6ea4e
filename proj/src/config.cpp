// SPDX-License-Identifier: Apache-2.0
#include "kanlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace kanlab {

namespace {

/// Strict reader over one JSON object: tracks the field path for error
/// messages and rejects keys that were never consumed.
class ObjectReader {
public:
    ObjectReader(const nlohmann::json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) {
            throw ConfigError("config error: '" + path_ + "' must be an object");
        }
    }

    std::string field_path(const std::string& name) const {
        return path_.empty() ? name : path_ + "." + name;
    }

    const nlohmann::json* optional(const std::string& name) {
        seen_.insert(name);
        auto it = obj_.find(name);
        return it == obj_.end() ? nullptr : &*it;
    }

    const nlohmann::json& require(const std::string& name) {
        const nlohmann::json* v = optional(name);
        if (v == nullptr) {
            throw ConfigError("config error: missing field '" + field_path(name) + "'");
        }
        return *v;
    }

    void finish() const {
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            if (seen_.find(it.key()) == seen_.end()) {
                throw ConfigError("config error: unknown field '" + field_path(it.key()) + "'");
            }
        }
    }

private:
    const nlohmann::json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

double as_double(const nlohmann::json& v, const std::string& path) {
    if (!v.is_number()) {
        throw ConfigError("config error: '" + path + "' must be a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        throw ConfigError("config error: '" + path + "' must be finite");
    }
    return x;
}

long long as_int(const nlohmann::json& v, const std::string& path) {
    if (!v.is_number_integer()) {
        throw ConfigError("config error: '" + path + "' must be an integer");
    }
    return v.get<long long>();
}

std::uint64_t as_seed(const nlohmann::json& v, const std::string& path) {
    if (!(v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0))) {
        throw ConfigError("config error: '" + path + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::string as_string(const nlohmann::json& v, const std::string& path) {
    if (!v.is_string()) {
        throw ConfigError("config error: '" + path + "' must be a string");
    }
    return v.get<std::string>();
}

Mat2i as_matrix(const nlohmann::json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_array() || !v[1].is_array() ||
        v[0].size() != 2 || v[1].size() != 2) {
        throw ConfigError("config error: '" + path + "' must be a 2x2 integer matrix [[a,b],[c,d]]");
    }
    Mat2i m;
    m.a = as_int(v[0][0], path + "[0][0]");
    m.b = as_int(v[0][1], path + "[0][1]");
    m.c = as_int(v[1][0], path + "[1][0]");
    m.d = as_int(v[1][1], path + "[1][1]");
    return m;
}

TorusPoint as_torus_point(const nlohmann::json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2) {
        throw ConfigError("config error: '" + path + "' must be a pair [u, v]");
    }
    return TorusPoint(as_double(v[0], path + "[0]"), as_double(v[1], path + "[1]"));
}

PerturbationMode as_mode(const nlohmann::json& v, const std::string& path) {
    const std::string s = as_string(v, path);
    if (s == "boundary_preserving") return PerturbationMode::BoundaryPreserving;
    if (s == "fiber_rotation") return PerturbationMode::FiberRotation;
    throw ConfigError("config error: '" + path +
                      "' must be \"boundary_preserving\" or \"fiber_rotation\"");
}

template <typename Fn>
auto rethrow_domain_as_config(const std::string& path, Fn&& fn) {
    try {
        return fn();
    } catch (const std::domain_error& e) {
        throw ConfigError("config error: '" + path + "': " + e.what());
    }
}

}  // namespace

std::shared_ptr<const SkewProductSystem> system_from_json(const nlohmann::json& doc,
                                                          const std::string& path_prefix) {
    ObjectReader r(doc, path_prefix);
    const std::string family = as_string(r.require("family"), r.field_path("family"));

    std::shared_ptr<const SkewProductSystem> sys;
    if (family == "kan_cylinder") {
        const long long k = as_int(r.require("k"), r.field_path("k"));
        const double eps = as_double(r.require("eps"), r.field_path("eps"));
        sys = rethrow_domain_as_config(path_prefix, [&] {
            return std::make_shared<KanCylinderSystem>(static_cast<int>(k), eps);
        });
    } else if (family == "toy") {
        const Mat2i m = as_matrix(r.require("matrix"), r.field_path("matrix"));
        const double delta = as_double(r.require("delta"), r.field_path("delta"));
        sys = rethrow_domain_as_config(path_prefix,
                                       [&] { return std::make_shared<ToySystem>(m, delta); });
    } else if (family == "kan_solid_torus" || family == "kan_t3") {
        const Mat2i m = as_matrix(r.require("matrix"), r.field_path("matrix"));
        const double eps = as_double(r.require("eps"), r.field_path("eps"));
        const double radius = as_double(r.require("bump_radius"), r.field_path("bump_radius"));
        std::optional<TorusPoint> p;
        std::optional<TorusPoint> q;
        if (const auto* v = r.optional("p")) p = as_torus_point(*v, r.field_path("p"));
        if (const auto* v = r.optional("q")) q = as_torus_point(*v, r.field_path("q"));
        sys = rethrow_domain_as_config(path_prefix, [&]() -> std::shared_ptr<const SkewProductSystem> {
            if (family == "kan_solid_torus") {
                return std::make_shared<KanSolidTorusSystem>(m, eps, radius, p, q);
            }
            return std::make_shared<KanT3System>(m, eps, radius, p, q);
        });
    } else {
        throw ConfigError("config error: '" + r.field_path("family") + "': unknown family '" +
                          family + "'");
    }

    if (const auto* v = r.optional("perturbation")) {
        ObjectReader pr(*v, r.field_path("perturbation"));
        Perturbation p;
        p.mode = as_mode(pr.require("mode"), pr.field_path("mode"));
        p.eta = as_double(pr.require("eta"), pr.field_path("eta"));
        if (const auto* ph = pr.optional("phase")) {
            p.phase = as_double(*ph, pr.field_path("phase"));
        }
        pr.finish();
        sys = rethrow_domain_as_config(r.field_path("perturbation"),
                                       [&] { return perturb(sys, p); });
    }
    r.finish();
    return sys;
}

namespace {

GridSpec grid_from_json(const nlohmann::json& doc, const std::string& prefix,
                        std::vector<int>* scales) {
    ObjectReader r(doc, prefix);
    GridSpec g{Box2D(), 512, 512, SliceSpec{}};
    if (const auto* v = r.optional("box")) {
        if (!v->is_array() || v->size() != 4) {
            throw ConfigError("config error: '" + r.field_path("box") +
                              "' must be [x_lo, y_lo, x_hi, y_hi]");
        }
        g.box = rethrow_domain_as_config(r.field_path("box"), [&] {
            return Box2D(as_double((*v)[0], r.field_path("box[0]")),
                         as_double((*v)[1], r.field_path("box[1]")),
                         as_double((*v)[2], r.field_path("box[2]")),
                         as_double((*v)[3], r.field_path("box[3]")));
        });
    }
    if (const auto* v = r.optional("nx")) {
        g.nx = static_cast<int>(as_int(*v, r.field_path("nx")));
    }
    if (const auto* v = r.optional("ny")) {
        g.ny = static_cast<int>(as_int(*v, r.field_path("ny")));
    }
    if (g.nx < 1 || g.ny < 1) {
        throw ConfigError("config error: '" + prefix + "': resolution must be at least 1 per axis");
    }
    if (const auto* v = r.optional("slice")) {
        ObjectReader sr(*v, r.field_path("slice"));
        const std::string axes = as_string(sr.require("axes"), sr.field_path("axes"));
        if (axes == "base_first_by_fiber") {
            g.slice.axes = SliceAxes::BaseFirstByFiber;
        } else if (axes == "base_second_by_fiber") {
            g.slice.axes = SliceAxes::BaseSecondByFiber;
        } else if (axes == "base_plane") {
            g.slice.axes = SliceAxes::BasePlane;
        } else {
            throw ConfigError("config error: '" + sr.field_path("axes") +
                              "' must be one of base_first_by_fiber, base_second_by_fiber, base_plane");
        }
        if (const auto* f = sr.optional("fixed")) {
            g.slice.fixed = as_double(*f, sr.field_path("fixed"));
        }
        sr.finish();
    }
    if (const auto* v = r.optional("scales")) {
        if (!v->is_array() || v->empty()) {
            throw ConfigError("config error: '" + r.field_path("scales") +
                              "' must be a non-empty array of integers");
        }
        scales->clear();
        for (size_t i = 0; i < v->size(); ++i) {
            const long long j = as_int((*v)[i], r.field_path("scales") + "[" + std::to_string(i) + "]");
            if (j < 1) {
                throw ConfigError("config error: '" + r.field_path("scales") +
                                  "': scales must be >= 1");
            }
            scales->push_back(static_cast<int>(j));
        }
    }
    r.finish();
    return g;
}

}  // namespace

RunConfig parse_run_config(const nlohmann::json& doc) {
    RunConfig cfg;
    cfg.raw = doc;
    ObjectReader r(doc, "");

    const long long version = as_int(r.require("schema_version"), "schema_version");
    if (version != 1) {
        throw ConfigError("config error: 'schema_version' must be 1");
    }
    cfg.schema_version = 1;

    cfg.operation = as_string(r.require("operation"), "operation");
    static const std::set<std::string> kOps = {"validate",  "lyapunov",  "basin", "intermingle",
                                               "dimension", "toy",       "sweep"};
    if (kOps.find(cfg.operation) == kOps.end()) {
        throw ConfigError("config error: 'operation' must be one of validate, lyapunov, basin, "
                          "intermingle, dimension, toy, sweep");
    }

    if (const auto* v = r.optional("output_dir")) {
        cfg.output_dir = as_string(*v, "output_dir");
    }
    if (const auto* v = r.optional("seed")) {
        cfg.seed = as_seed(*v, "seed");
    }
    const bool stochastic = cfg.operation == "lyapunov" || cfg.operation == "toy" ||
                            cfg.operation == "sweep";
    if (stochastic && !cfg.seed) {
        throw ConfigError("config error: missing field 'seed' (required for operation '" +
                          cfg.operation + "')");
    }

    cfg.system = system_from_json(r.require("system"), "system");
    if (cfg.operation == "toy" && dynamic_cast<const ToySystem*>(cfg.system.get()) == nullptr) {
        throw ConfigError(
            "config error: 'operation' toy requires system.family \"toy\" without a perturbation");
    }

    if (const auto* v = r.optional("quadrature")) {
        ObjectReader qr(*v, "quadrature");
        if (const auto* s = qr.optional("samples_1d")) {
            cfg.quadrature.samples_1d = static_cast<int>(as_int(*s, qr.field_path("samples_1d")));
        }
        if (const auto* s = qr.optional("samples_2d")) {
            cfg.quadrature.samples_2d = static_cast<int>(as_int(*s, qr.field_path("samples_2d")));
        }
        qr.finish();
        if (cfg.quadrature.samples_1d < 16 || cfg.quadrature.samples_2d < 16) {
            throw ConfigError("config error: 'quadrature': at least 16 samples per axis required");
        }
    }

    if (const auto* v = r.optional("orbit")) {
        ObjectReader orb(*v, "orbit");
        if (const auto* s = orb.optional("n_transient")) {
            cfg.orbit.n_transient = as_int(*s, orb.field_path("n_transient"));
        }
        if (const auto* s = orb.optional("n_average")) {
            cfg.orbit.n_average = as_int(*s, orb.field_path("n_average"));
        }
        orb.finish();
        if (cfg.orbit.n_average < 1 || cfg.orbit.n_transient < 0) {
            throw ConfigError("config error: 'orbit': n_average >= 1 and n_transient >= 0 required");
        }
    }
    cfg.orbit.seed = cfg.seed.value_or(0);

    if (const auto* v = r.optional("classify")) {
        ObjectReader cr(*v, "classify");
        if (const auto* s = cr.optional("max_iter")) {
            cfg.classify.max_iter = static_cast<int>(as_int(*s, cr.field_path("max_iter")));
        }
        if (const auto* s = cr.optional("tol")) {
            cfg.classify.tol = as_double(*s, cr.field_path("tol"));
        }
        if (const auto* s = cr.optional("window")) {
            cfg.classify.window = static_cast<int>(as_int(*s, cr.field_path("window")));
        }
        cr.finish();
        if (cfg.classify.window < 1 || cfg.classify.max_iter < cfg.classify.window) {
            throw ConfigError("config error: 'classify': max_iter >= window >= 1 required");
        }
        if (!(cfg.classify.tol > 0.0) || !(cfg.classify.tol < 0.25)) {
            throw ConfigError("config error: 'classify.tol' must lie in (0, 1/4)");
        }
    }

    if (const auto* v = r.optional("grid")) {
        cfg.grid = grid_from_json(*v, "grid", &cfg.scales);
    }

    if (const auto* v = r.optional("lyapunov")) {
        ObjectReader lr(*v, "lyapunov");
        if (const auto* s = lr.optional("start_level")) {
            cfg.lyapunov_start_level = as_double(*s, lr.field_path("start_level"));
        }
        lr.finish();
    }

    if (const auto* v = r.optional("sweep")) {
        ObjectReader sr(*v, "sweep");
        cfg.sweep_mode = as_mode(sr.require("mode"), sr.field_path("mode"));
        const nlohmann::json& etas = sr.require("etas");
        if (!etas.is_array() || etas.empty()) {
            throw ConfigError("config error: 'sweep.etas' must be a non-empty array");
        }
        for (size_t i = 0; i < etas.size(); ++i) {
            cfg.sweep_etas.push_back(as_double(etas[i], "sweep.etas[" + std::to_string(i) + "]"));
        }
        if (cfg.sweep_etas.front() != 0.0 ||
            !std::is_sorted(cfg.sweep_etas.begin(), cfg.sweep_etas.end())) {
            throw ConfigError("config error: 'sweep.etas' must be ascending and start at 0");
        }
        if (const auto* s = sr.optional("phase")) {
            cfg.sweep_phase = as_double(*s, sr.field_path("phase"));
        }
        sr.finish();
    } else if (cfg.operation == "sweep") {
        throw ConfigError("config error: missing field 'sweep' (required for operation 'sweep')");
    }

    r.finish();
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config error: cannot open '" + path + "'");
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config error: '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_run_config(doc);
}

std::string config_schema_text() {
    static const nlohmann::json schema = {
        {"schema_version", "integer, must be 1"},
        {"operation", "one of: validate | lyapunov | basin | intermingle | dimension | toy | sweep"},
        {"output_dir", "string (optional; --out overrides)"},
        {"seed", "non-negative integer; required for lyapunov, toy, sweep"},
        {"system",
         {{"family", "kan_cylinder | toy | kan_solid_torus | kan_t3"},
          {"k", "integer >= 3 (kan_cylinder)"},
          {"eps", "real in [0,1) (kan_cylinder, kan_solid_torus, kan_t3)"},
          {"matrix", "2x2 integer matrix [[a,b],[c,d]], hyperbolic, |det| = 1 (toy, kan_solid_torus, kan_t3)"},
          {"delta", "real in (0,1) (toy)"},
          {"bump_radius", "real in (0, 0.25] (kan_solid_torus, kan_t3)"},
          {"p", "[u, v] base fixed point (optional, default [0,0])"},
          {"q", "[u, v] base fixed point (optional, default: farthest fixed point from p)"},
          {"perturbation",
           {{"mode", "boundary_preserving | fiber_rotation"},
            {"eta", "real >= 0"},
            {"phase", "real (optional, default 0)"}}}}},
        {"quadrature",
         {{"samples_1d", "integer >= 16 (default 65536)"},
          {"samples_2d", "integer >= 16 per axis (default 1024)"}}},
        {"orbit",
         {{"n_transient", "integer >= 0 (default 1000)"},
          {"n_average", "integer >= 1 (default 1000000)"}}},
        {"classify",
         {{"max_iter", "integer >= window (default 10000)"},
          {"tol", "real in (0, 1/4) (default 0.001)"},
          {"window", "integer >= 1 (default 10)"}}},
        {"grid",
         {{"box", "[x_lo, y_lo, x_hi, y_hi] inside [0,1]^2 (default unit square)"},
          {"nx", "integer >= 1 (default 512)"},
          {"ny", "integer >= 1 (default 512)"},
          {"slice",
           {{"axes", "base_first_by_fiber | base_second_by_fiber | base_plane"},
            {"fixed", "held coordinate (default 0)"}}},
          {"scales", "array of integers >= 1 (default [5])"}}},
        {"lyapunov", {{"start_level", "invariant fiber level; omit for a seeded interior start"}}},
        {"sweep",
         {{"mode", "boundary_preserving | fiber_rotation"},
          {"etas", "ascending array starting at 0"},
          {"phase", "real (optional, default 0)"}}},
    };
    return schema.dump(2) + "\n";
}

}  // namespace kanlab
