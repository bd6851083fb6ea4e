// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "kanlab/mat2.hpp"
#include "kanlab/phase.hpp"

namespace kanlab {

enum class BaseKind { ExpandingCircle, HyperbolicTorus };
enum class FiberKind { Interval, Circle };

/// Which hypothesis set applies to the system when validating.
enum class ConditionFamily { KanEndomorphism, KanSolidTorus, KanT3, Toy };

struct QuadratureSettings {
    int samples_1d = 1 << 16;  // composite midpoint rule on S^1
    int samples_2d = 1024;     // per axis on T^2
};

/// Common interface of the four constructions and their perturbations.
/// A system is immutable after construction; every method is const and safe
/// to call concurrently.
class SkewProductSystem {
public:
    virtual ~SkewProductSystem() = default;

    /// One step of the full skew product. Validates the point against the
    /// system's phase space (std::domain_error on mismatch).
    PhasePoint map(const PhasePoint& x) const;

    virtual BasePoint base_map(const BasePoint& b) const = 0;
    virtual double fiber_map(const BasePoint& b, double t) const = 0;
    virtual double fiber_derivative(const BasePoint& b, double t) const = 0;

    virtual BaseKind base_kind() const = 0;
    virtual FiberKind fiber_kind() const = 0;
    virtual ConditionFamily condition_family() const = 0;

    /// The two invariant fiber levels: {0, 1} for interval fibers,
    /// {0, 1/2} for circle fibers. Index 0 is the level of label Attractor0.
    virtual std::array<double, 2> invariant_levels() const = 0;

    /// Base fixed points (p, q) over which the fiber maps have the
    /// sink-at-level0 / sink-at-level1 structure. Not meaningful for the toy
    /// system, whose fiber map does not depend on the base.
    virtual std::optional<std::pair<BasePoint, BasePoint>> marked_base_points() const {
        return std::nullopt;
    }

    /// All fixed points of the base map in the fundamental domain.
    virtual std::vector<BasePoint> base_fixed_points() const = 0;

    struct BaseSpectrum {
        double log_unstable = 0.0;                // log k or log|lambda_u|
        std::optional<double> log_stable;         // -log|lambda_u| for automorphisms
    };
    virtual BaseSpectrum base_spectrum() const = 0;

    /// Required sandwich for the fiber derivative: lower < |d_t phi| < upper.
    /// Expanding-circle base: (0, k). Toral base: (|lambda_s|, |lambda_u|),
    /// the spectral reading.
    struct DominationBounds {
        double lower = 0.0;
        double upper = 0.0;
    };
    virtual DominationBounds domination_bounds() const = 0;

    /// The base automorphism matrix, when the base is a torus.
    virtual const Mat2i* torus_matrix() const { return nullptr; }

    /// Structured description of family and parameters, for provenance.
    virtual nlohmann::json describe() const = 0;

    /// Throws std::domain_error if the point does not belong to this system's
    /// phase space (wrong base kind, or fiber outside the fiber domain).
    void check_point(const PhasePoint& x) const;
};

/// Componentwise action of an integer matrix on the torus, followed by wrap.
TorusPoint anosov_map(const Mat2i& m, const TorusPoint& z);

/// Kan's endomorphism on the cylinder S^1 x [0,1]:
///   (theta, t) -> (k*theta mod 1, t - eps*t*(1-t)*cos(2*pi*theta)).
/// eps = 0 is constructible as the degenerate decoupled case; the validator
/// reports its failures rather than the constructor rejecting it.
class KanCylinderSystem final : public SkewProductSystem {
public:
    explicit KanCylinderSystem(int k = 3, double eps = 0.5);

    int k() const { return k_; }
    double eps() const { return eps_; }

    BasePoint base_map(const BasePoint& b) const override;
    double fiber_map(const BasePoint& b, double t) const override;
    double fiber_derivative(const BasePoint& b, double t) const override;

    BaseKind base_kind() const override { return BaseKind::ExpandingCircle; }
    FiberKind fiber_kind() const override { return FiberKind::Interval; }
    ConditionFamily condition_family() const override { return ConditionFamily::KanEndomorphism; }
    std::array<double, 2> invariant_levels() const override { return {0.0, 1.0}; }
    std::optional<std::pair<BasePoint, BasePoint>> marked_base_points() const override;
    std::vector<BasePoint> base_fixed_points() const override;
    BaseSpectrum base_spectrum() const override;
    DominationBounds domination_bounds() const override;
    nlohmann::json describe() const override;

private:
    int k_;
    double eps_;
};

/// Anosov-times-Morse-Smale product on T^2 x S^1:
///   (z, t) -> (A z mod 1, t + (delta/2pi) * sin(2*pi*t)).
/// The fiber map has a source circle at t = 0 and a sink circle at t = 1/2.
class ToySystem final : public SkewProductSystem {
public:
    explicit ToySystem(Mat2i a = Mat2i{2, 1, 1, 1}, double delta = 0.5);

    const Mat2i& matrix() const { return a_; }
    double delta() const { return delta_; }

    BasePoint base_map(const BasePoint& b) const override;
    double fiber_map(const BasePoint& b, double t) const override;
    double fiber_derivative(const BasePoint& b, double t) const override;

    BaseKind base_kind() const override { return BaseKind::HyperbolicTorus; }
    FiberKind fiber_kind() const override { return FiberKind::Circle; }
    ConditionFamily condition_family() const override { return ConditionFamily::Toy; }
    std::array<double, 2> invariant_levels() const override { return {0.0, 0.5}; }
    std::vector<BasePoint> base_fixed_points() const override;
    BaseSpectrum base_spectrum() const override;
    DominationBounds domination_bounds() const override;
    const Mat2i* torus_matrix() const override { return &a_; }
    nlohmann::json describe() const override;

private:
    Mat2i a_;
    double delta_;
};

namespace detail {

/// Shared state of the two bump-coupled constructions over a toral base.
struct KanTorusCore {
    Mat2i m;
    double eps;
    double bump_radius;
    TorusPoint p;
    TorusPoint q;

    /// c(z) = beta(dist(z,p)/r) - beta(dist(z,q)/r); c(p) = 1, c(q) = -1,
    /// zero outside the two disjoint bump supports.
    double coupling(const TorusPoint& z) const;

    void validate(const char* who) const;
};

/// beta(s) = exp(1 - 1/(1 - s^2)) for |s| < 1, else 0.
double bump(double s);

}  // namespace detail

/// Kan-type diffeomorphism on the solid-torus-like space T^2 x [0,1]:
///   (z, t) -> (M z mod 1, t - eps*t*(1-t)*c(z)).
class KanSolidTorusSystem final : public SkewProductSystem {
public:
    explicit KanSolidTorusSystem(Mat2i m = Mat2i{5, 3, 3, 2}, double eps = 0.5,
                                 double bump_radius = 0.2,
                                 std::optional<TorusPoint> p = std::nullopt,
                                 std::optional<TorusPoint> q = std::nullopt);

    const Mat2i& matrix() const { return core_.m; }
    double eps() const { return core_.eps; }
    double bump_radius() const { return core_.bump_radius; }
    const TorusPoint& p() const { return core_.p; }
    const TorusPoint& q() const { return core_.q; }
    double coupling(const TorusPoint& z) const { return core_.coupling(z); }

    BasePoint base_map(const BasePoint& b) const override;
    double fiber_map(const BasePoint& b, double t) const override;
    double fiber_derivative(const BasePoint& b, double t) const override;

    BaseKind base_kind() const override { return BaseKind::HyperbolicTorus; }
    FiberKind fiber_kind() const override { return FiberKind::Interval; }
    ConditionFamily condition_family() const override { return ConditionFamily::KanSolidTorus; }
    std::array<double, 2> invariant_levels() const override { return {0.0, 1.0}; }
    std::optional<std::pair<BasePoint, BasePoint>> marked_base_points() const override;
    std::vector<BasePoint> base_fixed_points() const override;
    BaseSpectrum base_spectrum() const override;
    DominationBounds domination_bounds() const override;
    const Mat2i* torus_matrix() const override { return &core_.m; }
    nlohmann::json describe() const override;

private:
    detail::KanTorusCore core_;
};

/// Kan-like diffeomorphism on the 3-torus T^2 x S^1:
///   (z, t) -> (M z mod 1, t - (eps/2pi)*sin(2*pi*t)*c(z)).
/// The circles t = 0 and t = 1/2 are invariant exactly.
class KanT3System final : public SkewProductSystem {
public:
    explicit KanT3System(Mat2i m = Mat2i{5, 3, 3, 2}, double eps = 0.5,
                         double bump_radius = 0.2,
                         std::optional<TorusPoint> p = std::nullopt,
                         std::optional<TorusPoint> q = std::nullopt);

    const Mat2i& matrix() const { return core_.m; }
    double eps() const { return core_.eps; }
    double bump_radius() const { return core_.bump_radius; }
    const TorusPoint& p() const { return core_.p; }
    const TorusPoint& q() const { return core_.q; }
    double coupling(const TorusPoint& z) const { return core_.coupling(z); }

    BasePoint base_map(const BasePoint& b) const override;
    double fiber_map(const BasePoint& b, double t) const override;
    double fiber_derivative(const BasePoint& b, double t) const override;

    BaseKind base_kind() const override { return BaseKind::HyperbolicTorus; }
    FiberKind fiber_kind() const override { return FiberKind::Circle; }
    ConditionFamily condition_family() const override { return ConditionFamily::KanT3; }
    std::array<double, 2> invariant_levels() const override { return {0.0, 0.5}; }
    std::optional<std::pair<BasePoint, BasePoint>> marked_base_points() const override;
    std::vector<BasePoint> base_fixed_points() const override;
    BaseSpectrum base_spectrum() const override;
    DominationBounds domination_bounds() const override;
    const Mat2i* torus_matrix() const override { return &core_.m; }
    nlohmann::json describe() const override;

private:
    detail::KanTorusCore core_;
};

/// One checked hypothesis with its numeric evidence. Evidence keys are kept
/// in insertion order so serialized reports are deterministic.
struct ConditionEntry {
    std::string name;
    bool pass = false;
    std::vector<std::pair<std::string, double>> evidence;
    std::string note;

    std::optional<double> value(std::string_view key) const;
};

struct ConditionReport {
    std::string family;
    std::vector<ConditionEntry> entries;

    bool all_pass() const;
    const ConditionEntry* find(std::string_view name) const;
    nlohmann::json to_json() const;
};

/// Checks every hypothesis of the system's family and returns one entry per
/// condition. Failures are report entries, never exceptions.
ConditionReport validate_conditions(const SkewProductSystem& sys,
                                    const QuadratureSettings& quad = {});

}  // namespace kanlab
