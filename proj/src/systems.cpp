// SPDX-License-Identifier: Apache-2.0
#include "kanlab/systems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "kanlab/ergodic.hpp"

namespace kanlab {

PhasePoint SkewProductSystem::map(const PhasePoint& x) const {
    check_point(x);
    return PhasePoint{base_map(x.base), fiber_map(x.base, x.fiber)};
}

void SkewProductSystem::check_point(const PhasePoint& x) const {
    const bool base_ok = (base_kind() == BaseKind::ExpandingCircle)
                             ? std::holds_alternative<CirclePoint>(x.base)
                             : std::holds_alternative<TorusPoint>(x.base);
    if (!base_ok) {
        throw std::domain_error("phase point base does not match the system's base space");
    }
    if (!std::isfinite(x.fiber)) {
        throw std::domain_error("fiber coordinate must be finite");
    }
    if (fiber_kind() == FiberKind::Interval) {
        if (x.fiber < 0.0 || x.fiber > 1.0) {
            throw std::domain_error("fiber coordinate outside [0,1]");
        }
    } else {
        if (x.fiber < 0.0 || x.fiber >= 1.0) {
            throw std::domain_error("fiber coordinate outside [0,1)");
        }
    }
}

TorusPoint anosov_map(const Mat2i& m, const TorusPoint& z) {
    const double u = z.u.value();
    const double v = z.v.value();
    return TorusPoint(wrap_unit(static_cast<double>(m.a) * u + static_cast<double>(m.b) * v),
                      wrap_unit(static_cast<double>(m.c) * u + static_cast<double>(m.d) * v));
}

namespace {

nlohmann::json matrix_json(const Mat2i& m) {
    return nlohmann::json::array({nlohmann::json::array({m.a, m.b}),
                                  nlohmann::json::array({m.c, m.d})});
}

/// All fixed points of a hyperbolic automorphism on T^2: solutions of
/// (M - I) z in Z^2, enumerated exactly as rationals with denominator
/// |det(M - I)|.
std::vector<TorusPoint> torus_fixed_points(const Mat2i& m) {
    const Mat2i n = m.minus_identity();
    const long long det = n.det();  // nonzero: 1 is not an eigenvalue of a hyperbolic m
    const long long den = std::llabs(det);
    const long long sgn = det > 0 ? 1 : -1;
    std::set<std::pair<long long, long long>> residues;
    for (long long n1 = 0; n1 < den; ++n1) {
        for (long long n2 = 0; n2 < den; ++n2) {
            // adj(M - I) * (n1, n2)
            const long long v1 = n.d * n1 - n.b * n2;
            const long long v2 = -n.c * n1 + n.a * n2;
            const long long r1 = ((v1 * sgn) % den + den) % den;
            const long long r2 = ((v2 * sgn) % den + den) % den;
            residues.insert({r1, r2});
        }
    }
    if (static_cast<long long>(residues.size()) != den) {
        throw std::logic_error("torus_fixed_points: enumeration does not match |det(M-I)|");
    }
    std::vector<TorusPoint> pts;
    pts.reserve(residues.size());
    for (const auto& [r1, r2] : residues) {
        pts.emplace_back(static_cast<double>(r1) / static_cast<double>(den),
                         static_cast<double>(r2) / static_cast<double>(den));
    }
    return pts;
}

}  // namespace

// ---------------------------------------------------------------------------
// Kan cylinder endomorphism

KanCylinderSystem::KanCylinderSystem(int k, double eps) : k_(k), eps_(eps) {
    if (k < 3) {
        throw std::domain_error("KanCylinderSystem: base expansion factor k must be >= 3");
    }
    if (!(eps >= 0.0) || eps >= 1.0) {
        throw std::domain_error("KanCylinderSystem: eps must lie in [0,1)");
    }
}

BasePoint KanCylinderSystem::base_map(const BasePoint& b) const {
    return CirclePoint(wrap_unit(static_cast<double>(k_) * as_circle(b).value()));
}

double KanCylinderSystem::fiber_map(const BasePoint& b, double t) const {
    // phi(theta, t) = t - eps * t (1 - t) cos(2 pi theta); fixes t = 0 and t = 1 exactly
    return t - eps_ * t * (1.0 - t) * cos_two_pi(as_circle(b).value());
}

double KanCylinderSystem::fiber_derivative(const BasePoint& b, double t) const {
    return 1.0 - eps_ * (1.0 - 2.0 * t) * cos_two_pi(as_circle(b).value());
}

std::optional<std::pair<BasePoint, BasePoint>> KanCylinderSystem::marked_base_points() const {
    // p: coupling cos(2 pi theta) maximal (sink at t=0); q: coupling most negative
    // (sink at t=1). For theta -> k theta the fixed points are i/(k-1).
    CirclePoint p(0.0);
    CirclePoint q(0.0);
    double best = 1.0;
    for (int i = 1; i <= k_ - 2; ++i) {
        CirclePoint cand(static_cast<double>(i) / static_cast<double>(k_ - 1));
        double c = cos_two_pi(cand.value());
        if (c < best) {
            best = c;
            q = cand;
        }
    }
    return std::make_pair(BasePoint{p}, BasePoint{q});
}

std::vector<BasePoint> KanCylinderSystem::base_fixed_points() const {
    std::vector<BasePoint> pts;
    for (int i = 0; i < k_ - 1; ++i) {
        pts.emplace_back(CirclePoint(static_cast<double>(i) / static_cast<double>(k_ - 1)));
    }
    return pts;
}

SkewProductSystem::BaseSpectrum KanCylinderSystem::base_spectrum() const {
    return {std::log(static_cast<double>(k_)), std::nullopt};
}

SkewProductSystem::DominationBounds KanCylinderSystem::domination_bounds() const {
    return {0.0, static_cast<double>(k_)};
}

nlohmann::json KanCylinderSystem::describe() const {
    return {{"family", "kan_cylinder"}, {"k", k_}, {"eps", eps_}};
}

// ---------------------------------------------------------------------------
// Anosov x Morse-Smale product

ToySystem::ToySystem(Mat2i a, double delta) : a_(a), delta_(delta) {
    if (!a.is_hyperbolic_automorphism()) {
        throw std::domain_error("ToySystem: base matrix must be a hyperbolic automorphism (|det|=1)");
    }
    if (!(delta > 0.0) || delta >= 1.0) {
        throw std::domain_error("ToySystem: delta must lie in (0,1)");
    }
}

BasePoint ToySystem::base_map(const BasePoint& b) const { return anosov_map(a_, as_torus(b)); }

double ToySystem::fiber_map(const BasePoint&, double t) const {
    // xi(t) = t + (delta/2pi) sin(2 pi t): source circle at 0, sink at 1/2
    return t + delta_ / (2.0 * M_PI) * sin_two_pi(t);
}

double ToySystem::fiber_derivative(const BasePoint&, double t) const {
    return 1.0 + delta_ * cos_two_pi(t);
}

std::vector<BasePoint> ToySystem::base_fixed_points() const {
    std::vector<BasePoint> pts;
    for (const auto& z : torus_fixed_points(a_)) pts.emplace_back(z);
    return pts;
}

SkewProductSystem::BaseSpectrum ToySystem::base_spectrum() const {
    const double lu = std::log(a_.eig_max_abs());
    return {lu, -lu};
}

SkewProductSystem::DominationBounds ToySystem::domination_bounds() const {
    return {a_.eig_min_abs(), a_.eig_max_abs()};
}

nlohmann::json ToySystem::describe() const {
    return {{"family", "toy"}, {"matrix", matrix_json(a_)}, {"delta", delta_}};
}

// ---------------------------------------------------------------------------
// Bump-coupled constructions over a toral base

namespace detail {

double bump(double s) {
    const double s2 = s * s;
    if (s2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s2));
}

double KanTorusCore::coupling(const TorusPoint& z) const {
    return bump(torus_dist(z, p) / bump_radius) - bump(torus_dist(z, q) / bump_radius);
}

void KanTorusCore::validate(const char* who) const {
    if (!m.is_hyperbolic_automorphism()) {
        throw std::domain_error(std::string(who) + ": base matrix must be a hyperbolic automorphism (|det|=1)");
    }
    if (!(eps >= 0.0) || eps >= 1.0) {
        throw std::domain_error(std::string(who) + ": eps must lie in [0,1)");
    }
    if (!(bump_radius > 0.0) || bump_radius > 0.25) {
        throw std::domain_error(std::string(who) + ": bump radius must lie in (0, 0.25]");
    }
    const double fix_tol = 1e-9;
    if (torus_dist(anosov_map(m, p), p) > fix_tol) {
        throw std::domain_error(std::string(who) + ": p is not a fixed point of the base matrix");
    }
    if (torus_dist(anosov_map(m, q), q) > fix_tol) {
        throw std::domain_error(std::string(who) + ": q is not a fixed point of the base matrix");
    }
    if (!(torus_dist(p, q) > 2.0 * bump_radius)) {
        throw std::domain_error(std::string(who) +
                                ": bump supports around p and q must be disjoint (distance > 2r)");
    }
}

}  // namespace detail

namespace {

/// Defaults when p or q is not supplied: p = origin (fixed by every
/// automorphism), q = the fixed point farthest from p (first in enumeration
/// order on ties). Requires at least two fixed points.
detail::KanTorusCore make_core(const char* who, Mat2i m, double eps, double bump_radius,
                               std::optional<TorusPoint> p, std::optional<TorusPoint> q) {
    detail::KanTorusCore core;
    core.m = m;
    core.eps = eps;
    core.bump_radius = bump_radius;
    core.p = p.value_or(TorusPoint(0.0, 0.0));
    if (q) {
        core.q = *q;
    } else {
        if (!m.is_hyperbolic_automorphism()) {
            throw std::domain_error(std::string(who) +
                                    ": base matrix must be a hyperbolic automorphism (|det|=1)");
        }
        const auto fixed = torus_fixed_points(m);
        if (fixed.size() < 2) {
            throw std::domain_error(std::string(who) +
                                    ": base matrix must have at least two fixed points");
        }
        double best = -1.0;
        for (const auto& z : fixed) {
            const double d = torus_dist(z, core.p);
            if (d > best + 1e-15) {
                best = d;
                core.q = z;
            }
        }
    }
    core.validate(who);
    return core;
}

}  // namespace

KanSolidTorusSystem::KanSolidTorusSystem(Mat2i m, double eps, double bump_radius,
                                         std::optional<TorusPoint> p, std::optional<TorusPoint> q)
    : core_(make_core("KanSolidTorusSystem", m, eps, bump_radius, p, q)) {}

BasePoint KanSolidTorusSystem::base_map(const BasePoint& b) const {
    return anosov_map(core_.m, as_torus(b));
}

double KanSolidTorusSystem::fiber_map(const BasePoint& b, double t) const {
    // psi(z, t) = t - eps t (1 - t) c(z); fixes t = 0 and t = 1 exactly
    return t - core_.eps * t * (1.0 - t) * core_.coupling(as_torus(b));
}

double KanSolidTorusSystem::fiber_derivative(const BasePoint& b, double t) const {
    return 1.0 - core_.eps * (1.0 - 2.0 * t) * core_.coupling(as_torus(b));
}

std::optional<std::pair<BasePoint, BasePoint>> KanSolidTorusSystem::marked_base_points() const {
    return std::make_pair(BasePoint{core_.p}, BasePoint{core_.q});
}

std::vector<BasePoint> KanSolidTorusSystem::base_fixed_points() const {
    std::vector<BasePoint> pts;
    for (const auto& z : torus_fixed_points(core_.m)) pts.emplace_back(z);
    return pts;
}

SkewProductSystem::BaseSpectrum KanSolidTorusSystem::base_spectrum() const {
    const double lu = std::log(core_.m.eig_max_abs());
    return {lu, -lu};
}

SkewProductSystem::DominationBounds KanSolidTorusSystem::domination_bounds() const {
    return {core_.m.eig_min_abs(), core_.m.eig_max_abs()};
}

nlohmann::json KanSolidTorusSystem::describe() const {
    return {{"family", "kan_solid_torus"},
            {"matrix", matrix_json(core_.m)},
            {"eps", core_.eps},
            {"bump_radius", core_.bump_radius},
            {"p", {core_.p.u.value(), core_.p.v.value()}},
            {"q", {core_.q.u.value(), core_.q.v.value()}}};
}

KanT3System::KanT3System(Mat2i m, double eps, double bump_radius, std::optional<TorusPoint> p,
                         std::optional<TorusPoint> q)
    : core_(make_core("KanT3System", m, eps, bump_radius, p, q)) {}

BasePoint KanT3System::base_map(const BasePoint& b) const {
    return anosov_map(core_.m, as_torus(b));
}

double KanT3System::fiber_map(const BasePoint& b, double t) const {
    // phi(z, t) = t - (eps/2pi) sin(2 pi t) c(z); fixes t = 0 and t = 1/2 exactly
    const double c = core_.coupling(as_torus(b));
    return wrap_unit(t - core_.eps / (2.0 * M_PI) * sin_two_pi(t) * c);
}

double KanT3System::fiber_derivative(const BasePoint& b, double t) const {
    return 1.0 - core_.eps * cos_two_pi(t) * core_.coupling(as_torus(b));
}

std::optional<std::pair<BasePoint, BasePoint>> KanT3System::marked_base_points() const {
    return std::make_pair(BasePoint{core_.p}, BasePoint{core_.q});
}

std::vector<BasePoint> KanT3System::base_fixed_points() const {
    std::vector<BasePoint> pts;
    for (const auto& z : torus_fixed_points(core_.m)) pts.emplace_back(z);
    return pts;
}

SkewProductSystem::BaseSpectrum KanT3System::base_spectrum() const {
    const double lu = std::log(core_.m.eig_max_abs());
    return {lu, -lu};
}

SkewProductSystem::DominationBounds KanT3System::domination_bounds() const {
    return {core_.m.eig_min_abs(), core_.m.eig_max_abs()};
}

nlohmann::json KanT3System::describe() const {
    return {{"family", "kan_t3"},
            {"matrix", matrix_json(core_.m)},
            {"eps", core_.eps},
            {"bump_radius", core_.bump_radius},
            {"p", {core_.p.u.value(), core_.p.v.value()}},
            {"q", {core_.q.u.value(), core_.q.v.value()}}};
}

// ---------------------------------------------------------------------------
// Condition validation

std::optional<double> ConditionEntry::value(std::string_view key) const {
    for (const auto& [k, v] : evidence) {
        if (k == key) return v;
    }
    return std::nullopt;
}

bool ConditionReport::all_pass() const {
    return std::all_of(entries.begin(), entries.end(),
                       [](const ConditionEntry& e) { return e.pass; });
}

const ConditionEntry* ConditionReport::find(std::string_view name) const {
    for (const auto& e : entries) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

nlohmann::json ConditionReport::to_json() const {
    nlohmann::json out = {{"family", family}, {"all_pass", all_pass()}};
    nlohmann::json list = nlohmann::json::array();
    for (const auto& e : entries) {
        nlohmann::json ev = nlohmann::json::object();
        for (const auto& [k, v] : e.evidence) ev[k] = v;
        nlohmann::json item = {{"name", e.name}, {"pass", e.pass}, {"evidence", ev}};
        if (!e.note.empty()) item["note"] = e.note;
        list.push_back(item);
    }
    out["conditions"] = list;
    return out;
}

namespace {

constexpr int kInvarianceCircleSamples = 256;
constexpr int kInvarianceTorusSamples = 32;  // per axis
constexpr int kDerivCircleBaseSamples = 2048;
constexpr int kDerivTorusBaseSamples = 128;  // per axis
constexpr int kDerivFiberSamples = 64;
constexpr int kStructureSamples = 512;

std::vector<BasePoint> invariance_sample_bases(const SkewProductSystem& sys) {
    std::vector<BasePoint> out;
    if (sys.base_kind() == BaseKind::ExpandingCircle) {
        out.reserve(kInvarianceCircleSamples + 2);
        for (int i = 0; i < kInvarianceCircleSamples; ++i) {
            out.emplace_back(CirclePoint(static_cast<double>(i) / kInvarianceCircleSamples));
        }
    } else {
        out.reserve(kInvarianceTorusSamples * kInvarianceTorusSamples + 2);
        for (int i = 0; i < kInvarianceTorusSamples; ++i) {
            for (int j = 0; j < kInvarianceTorusSamples; ++j) {
                out.emplace_back(TorusPoint(static_cast<double>(i) / kInvarianceTorusSamples,
                                            static_cast<double>(j) / kInvarianceTorusSamples));
            }
        }
    }
    if (auto mk = sys.marked_base_points()) {
        out.push_back(mk->first);
        out.push_back(mk->second);
    }
    return out;
}

std::vector<double> fiber_sample_levels(const SkewProductSystem& sys) {
    std::vector<double> ts;
    const int n = kDerivFiberSamples;
    if (sys.fiber_kind() == FiberKind::Interval) {
        ts.reserve(n + 1);
        for (int i = 0; i <= n; ++i) ts.push_back(static_cast<double>(i) / n);
    } else {
        ts.reserve(n);
        for (int i = 0; i < n; ++i) ts.push_back(static_cast<double>(i) / n);
    }
    return ts;
}

struct DerivRange {
    double inf = std::numeric_limits<double>::infinity();
    double sup = 0.0;
};

DerivRange sampled_derivative_range(const SkewProductSystem& sys) {
    const auto ts = fiber_sample_levels(sys);
    std::vector<BasePoint> bases;
    if (sys.base_kind() == BaseKind::ExpandingCircle) {
        for (int i = 0; i < kDerivCircleBaseSamples; ++i) {
            bases.emplace_back(CirclePoint(static_cast<double>(i) / kDerivCircleBaseSamples));
        }
    } else {
        for (int i = 0; i < kDerivTorusBaseSamples; ++i) {
            for (int j = 0; j < kDerivTorusBaseSamples; ++j) {
                bases.emplace_back(TorusPoint(static_cast<double>(i) / kDerivTorusBaseSamples,
                                              static_cast<double>(j) / kDerivTorusBaseSamples));
            }
        }
    }
    if (auto mk = sys.marked_base_points()) {
        bases.push_back(mk->first);
        bases.push_back(mk->second);
    }
    DerivRange r;
    for (const auto& b : bases) {
        for (double t : ts) {
            const double d = std::fabs(sys.fiber_derivative(b, t));
            r.inf = std::min(r.inf, d);
            r.sup = std::max(r.sup, d);
        }
    }
    return r;
}

/// Fiber-map structure over a fixed base point: multipliers at the two
/// invariant levels and the number of sampled interior fixed points or
/// sign changes of the displacement.
struct FiberStructure {
    double mult_level0 = 0.0;
    double mult_level1 = 0.0;
    int interior_fixed = 0;
};

FiberStructure fiber_structure(const SkewProductSystem& sys, const BasePoint& b) {
    const auto levels = sys.invariant_levels();
    FiberStructure fs;
    fs.mult_level0 = std::fabs(sys.fiber_derivative(b, levels[0]));
    fs.mult_level1 = std::fabs(sys.fiber_derivative(b, levels[1]));
    const bool circle = sys.fiber_kind() == FiberKind::Circle;
    double prev = 0.0;
    bool have_prev = false;
    for (int i = 1; i < kStructureSamples; ++i) {
        const double t = static_cast<double>(i) / kStructureSamples;
        if (t == levels[0] || t == levels[1]) {
            have_prev = false;  // structural zero, not an interior fixed point
            continue;
        }
        double g;
        if (circle) {
            g = wrap_unit(sys.fiber_map(b, t) - t + 0.5) - 0.5;  // signed displacement
        } else {
            g = sys.fiber_map(b, t) - t;
        }
        if (g == 0.0) {
            ++fs.interior_fixed;
            have_prev = false;
            continue;
        }
        if (have_prev && (g > 0.0) != (prev > 0.0)) {
            ++fs.interior_fixed;
        }
        prev = g;
        have_prev = true;
    }
    return fs;
}

ConditionEntry boundary_invariance_entry(const SkewProductSystem& sys, const std::string& name) {
    const auto levels = sys.invariant_levels();
    double e0 = 0.0;
    double e1 = 0.0;
    for (const auto& b : invariance_sample_bases(sys)) {
        e0 = std::max(e0, std::fabs(sys.fiber_map(b, levels[0]) - levels[0]));
        e1 = std::max(e1, std::fabs(sys.fiber_map(b, levels[1]) - levels[1]));
    }
    ConditionEntry e;
    e.name = name;
    e.pass = (e0 == 0.0 && e1 == 0.0);
    e.evidence = {{"max_abs_error_level0", e0}, {"max_abs_error_level1", e1}};
    e.note = "exact check at sampled base points";
    return e;
}

ConditionEntry fixed_point_structure_entry(const SkewProductSystem& sys, const std::string& name) {
    const auto mk = sys.marked_base_points();
    if (!mk) {
        throw std::logic_error("fixed_point_structure_entry: system has no marked base points");
    }
    const auto sp = fiber_structure(sys, mk->first);
    const auto sq = fiber_structure(sys, mk->second);
    // Over p: hyperbolic sink at level 0, hyperbolic source at level 1.
    // Over q: the reverse. No further fixed points in between.
    const bool pass_p = sp.interior_fixed == 0 && sp.mult_level0 < 1.0 && sp.mult_level1 > 1.0;
    const bool pass_q = sq.interior_fixed == 0 && sq.mult_level0 > 1.0 && sq.mult_level1 < 1.0;
    ConditionEntry e;
    e.name = name;
    e.pass = pass_p && pass_q;
    e.evidence = {{"p_multiplier_level0", sp.mult_level0},
                  {"p_multiplier_level1", sp.mult_level1},
                  {"p_interior_fixed_points", static_cast<double>(sp.interior_fixed)},
                  {"q_multiplier_level0", sq.mult_level0},
                  {"q_multiplier_level1", sq.mult_level1},
                  {"q_interior_fixed_points", static_cast<double>(sq.interior_fixed)}};
    return e;
}

ConditionEntry derivative_bound_entry(const SkewProductSystem& sys, const std::string& name) {
    const auto r = sampled_derivative_range(sys);
    const auto bounds = sys.domination_bounds();
    ConditionEntry e;
    e.name = name;
    e.evidence = {{"inf_abs_fiber_derivative", r.inf}, {"sup_abs_fiber_derivative", r.sup}};
    if (sys.base_kind() == BaseKind::ExpandingCircle) {
        // |d_t phi| < k; the lower bound is positivity only
        e.pass = r.sup < bounds.upper;
        e.evidence.emplace_back("bound_upper", bounds.upper);
    } else {
        e.pass = r.inf > bounds.lower && r.sup < bounds.upper;
        e.evidence.emplace_back("spectral_lower", bounds.lower);
        e.evidence.emplace_back("spectral_upper", bounds.upper);
        if (const Mat2i* m = sys.torus_matrix()) {
            // The operator-norm reading of the sandwich, recorded alongside.
            e.evidence.emplace_back("opnorm_lower", m->op_norm_inv_inverse());
            e.evidence.emplace_back("opnorm_upper", m->op_norm());
        }
        e.evidence.emplace_back("margin",
                                std::min(r.inf - bounds.lower, bounds.upper - r.sup));
    }
    return e;
}

ConditionEntry boundary_integral_entry(const SkewProductSystem& sys, const std::string& name,
                                       const QuadratureSettings& quad) {
    const auto levels = sys.invariant_levels();
    const double i0 = boundary_log_integral(sys, levels[0], quad);
    const double i1 = boundary_log_integral(sys, levels[1], quad);
    ConditionEntry e;
    e.name = name;
    e.pass = i0 < 0.0 && i1 < 0.0;
    e.evidence = {{"integral_level0", i0}, {"integral_level1", i1}};
    e.note = "mean of log|d_t fiber map| over the base, midpoint quadrature";
    return e;
}

ConditionReport validate_kan(const SkewProductSystem& sys, const QuadratureSettings& quad,
                             const std::string& family, const char* prefix) {
    ConditionReport report;
    report.family = family;
    report.entries.push_back(boundary_invariance_entry(sys, std::string(prefix) + "1"));
    report.entries.push_back(fixed_point_structure_entry(sys, std::string(prefix) + "2"));
    report.entries.push_back(derivative_bound_entry(sys, std::string(prefix) + "3"));
    report.entries.push_back(boundary_integral_entry(sys, std::string(prefix) + "4", quad));
    return report;
}

ConditionReport validate_toy(const SkewProductSystem& sys, const QuadratureSettings&) {
    ConditionReport report;
    report.family = "toy";

    const Mat2i* m = sys.torus_matrix();
    if (m == nullptr) {
        throw std::logic_error("validate_toy: toy system has no base matrix");
    }
    ConditionEntry base;
    base.name = "base_hyperbolic";
    base.pass = m->is_hyperbolic_automorphism();
    base.evidence = {{"trace", static_cast<double>(m->trace())},
                     {"det", static_cast<double>(m->det())},
                     {"lambda_unstable", m->eig_max_abs()},
                     {"lambda_stable", m->eig_min_abs()}};
    report.entries.push_back(base);

    // Fiber structure is base-independent; analyze over the origin.
    const BasePoint origin{TorusPoint(0.0, 0.0)};
    const auto levels = sys.invariant_levels();
    const auto fs = fiber_structure(sys, origin);
    double e0 = 0.0, e1 = 0.0;
    for (const auto& b : invariance_sample_bases(sys)) {
        e0 = std::max(e0, std::fabs(sys.fiber_map(b, levels[0]) - levels[0]));
        e1 = std::max(e1, std::fabs(sys.fiber_map(b, levels[1]) - levels[1]));
    }
    ConditionEntry ms;
    ms.name = "fiber_morse_smale";
    // source circle at level 0, sink circle at level 1/2, nothing in between
    ms.pass = (e0 == 0.0 && e1 == 0.0) && fs.interior_fixed == 0 && fs.mult_level0 > 1.0 &&
              fs.mult_level1 < 1.0;
    ms.evidence = {{"max_abs_error_level0", e0},
                   {"max_abs_error_level1", e1},
                   {"source_multiplier", fs.mult_level0},
                   {"sink_multiplier", fs.mult_level1},
                   {"interior_fixed_points", static_cast<double>(fs.interior_fixed)}};
    report.entries.push_back(ms);

    const auto r = sampled_derivative_range(sys);
    const auto bounds = sys.domination_bounds();
    ConditionEntry dom;
    dom.name = "domination";
    dom.pass = r.inf > bounds.lower && r.sup < bounds.upper;
    dom.evidence = {{"inf_abs_fiber_derivative", r.inf},
                    {"sup_abs_fiber_derivative", r.sup},
                    {"lambda_stable", bounds.lower},
                    {"lambda_unstable", bounds.upper},
                    {"margin", std::min(r.inf - bounds.lower, bounds.upper - r.sup)}};
    report.entries.push_back(dom);
    return report;
}

}  // namespace

ConditionReport validate_conditions(const SkewProductSystem& sys, const QuadratureSettings& quad) {
    if (quad.samples_1d < 16 || quad.samples_2d < 16) {
        throw std::domain_error("validate_conditions: quadrature resolution must be >= 16 samples per axis");
    }
    switch (sys.condition_family()) {
        case ConditionFamily::KanEndomorphism:
            return validate_kan(sys, quad, "kan_endomorphism", "K");
        case ConditionFamily::KanSolidTorus:
            return validate_kan(sys, quad, "kan_solid_torus", "KD");
        case ConditionFamily::KanT3:
            return validate_kan(sys, quad, "kan_t3", "KB");
        case ConditionFamily::Toy:
            return validate_toy(sys, quad);
    }
    throw std::logic_error("validate_conditions: unknown condition family");
}

}  // namespace kanlab
