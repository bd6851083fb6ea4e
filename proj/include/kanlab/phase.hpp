// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <variant>
#include <vector>

namespace kanlab {

/// Canonical representative of x mod 1 in [0,1).
/// Results in [1 - 2^-52, 1) snap to 0 so long orbits cannot drift onto the
/// excluded endpoint. Throws std::domain_error on non-finite input.
double wrap_unit(double x);

/// A point on the circle R/Z, stored as its canonical representative in [0,1).
class CirclePoint {
public:
    CirclePoint() = default;
    explicit CirclePoint(double value);

    double value() const { return x_; }

    friend bool operator==(CirclePoint a, CirclePoint b) { return a.x_ == b.x_; }
    friend bool operator!=(CirclePoint a, CirclePoint b) { return a.x_ != b.x_; }

private:
    double x_ = 0.0;
};

/// Shorter-arc distance on R/Z; range [0, 1/2].
double circle_dist(CirclePoint a, CirclePoint b);

/// A point on the 2-torus (R/Z)^2, both coordinates canonical in [0,1).
struct TorusPoint {
    CirclePoint u;
    CirclePoint v;

    TorusPoint() = default;
    TorusPoint(double u_, double v_) : u(u_), v(v_) {}

    friend bool operator==(const TorusPoint& a, const TorusPoint& b) {
        return a.u == b.u && a.v == b.v;
    }
};

/// Euclidean distance on the torus, per-coordinate shorter arcs.
double torus_dist(const TorusPoint& a, const TorusPoint& b);

/// Base coordinate of a skew product: a circle for the expanding-map family,
/// a 2-torus for the Anosov families.
using BasePoint = std::variant<CirclePoint, TorusPoint>;

const CirclePoint& as_circle(const BasePoint& b);  // throws std::domain_error on mismatch
const TorusPoint& as_torus(const BasePoint& b);

/// Point of a skew-product phase space. The fiber coordinate lives in [0,1]
/// for interval-fiber systems and [0,1) for circle-fiber systems; the owning
/// system checks the domain, not this struct.
struct PhasePoint {
    BasePoint base;
    double fiber = 0.0;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }
};

/// Axis-aligned rectangle. Constructor requires lower < upper per axis.
/// Default-constructs to the unit square.
class Box2D {
public:
    Box2D() : x_lo_(0.0), y_lo_(0.0), x_hi_(1.0), y_hi_(1.0) {}
    Box2D(double x_lo, double y_lo, double x_hi, double y_hi);

    double x_lo() const { return x_lo_; }
    double y_lo() const { return y_lo_; }
    double x_hi() const { return x_hi_; }
    double y_hi() const { return y_hi_; }

    double width() const { return x_hi_ - x_lo_; }
    double height() const { return y_hi_ - y_lo_; }

    /// Center of cell (ix, iy) of an nx-by-ny partition of the box.
    Vec2 cell_center(int ix, int iy, int nx, int ny) const;

private:
    double x_lo_, y_lo_, x_hi_, y_hi_;
};

/// Cell-center sample points of an nx-by-ny partition, row-major
/// (x varies fastest). Deterministic function of its arguments.
std::vector<Vec2> make_grid(const Box2D& box, int nx, int ny);

/// sin(2*pi*x) and cos(2*pi*x) with exact zeros at quarter-turn multiples,
/// so fiber maps that factor sin(2*pi*t) fix t = 0 and t = 1/2 with zero
/// floating-point error.
double sin_two_pi(double x);
double cos_two_pi(double x);

}  // namespace kanlab
