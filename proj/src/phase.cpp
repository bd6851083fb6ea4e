// SPDX-License-Identifier: Apache-2.0
#include "kanlab/phase.hpp"

#include <cmath>
#include <stdexcept>

namespace kanlab {

namespace {
constexpr double kWrapSnap = 0x1p-52;  // band [1 - 2^-52, 1) snaps to 0
}

double wrap_unit(double x) {
    if (!std::isfinite(x)) {
        throw std::domain_error("wrap_unit: input must be finite");
    }
    double r = x - std::floor(x);
    if (r >= 1.0 - kWrapSnap) {
        return 0.0;
    }
    return r == 0.0 ? 0.0 : r;  // normalize -0
}

CirclePoint::CirclePoint(double value) : x_(wrap_unit(value)) {}

double circle_dist(CirclePoint a, CirclePoint b) {
    double d = std::fabs(a.value() - b.value());  // in [0,1)
    return std::min(d, 1.0 - d);
}

double torus_dist(const TorusPoint& a, const TorusPoint& b) {
    double du = circle_dist(a.u, b.u);
    double dv = circle_dist(a.v, b.v);
    return std::sqrt(du * du + dv * dv);
}

const CirclePoint& as_circle(const BasePoint& b) {
    if (const auto* c = std::get_if<CirclePoint>(&b)) {
        return *c;
    }
    throw std::domain_error("base point is not a circle coordinate");
}

const TorusPoint& as_torus(const BasePoint& b) {
    if (const auto* t = std::get_if<TorusPoint>(&b)) {
        return *t;
    }
    throw std::domain_error("base point is not a torus coordinate");
}

Box2D::Box2D(double x_lo, double y_lo, double x_hi, double y_hi)
    : x_lo_(x_lo), y_lo_(y_lo), x_hi_(x_hi), y_hi_(y_hi) {
    if (!(std::isfinite(x_lo) && std::isfinite(y_lo) && std::isfinite(x_hi) && std::isfinite(y_hi))) {
        throw std::domain_error("Box2D: corners must be finite");
    }
    if (!(x_lo < x_hi) || !(y_lo < y_hi)) {
        throw std::domain_error("Box2D: lower corner must be strictly below upper corner");
    }
}

Vec2 Box2D::cell_center(int ix, int iy, int nx, int ny) const {
    return Vec2{x_lo_ + (ix + 0.5) * width() / nx,
                y_lo_ + (iy + 0.5) * height() / ny};
}

std::vector<Vec2> make_grid(const Box2D& box, int nx, int ny) {
    if (nx < 1 || ny < 1) {
        throw std::domain_error("make_grid: resolution must be at least 1 per axis");
    }
    std::vector<Vec2> pts;
    pts.reserve(static_cast<size_t>(nx) * static_cast<size_t>(ny));
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            pts.push_back(box.cell_center(ix, iy, nx, ny));
        }
    }
    return pts;
}

namespace {

// sin(pi*u) folded to [0, 1/2]; zero is exact at integer u.
double sin_pi_half_turns(double u) {
    u -= 2.0 * std::floor(u * 0.5);  // [0,2)
    double sign = 1.0;
    if (u >= 1.0) {
        sign = -1.0;
        u -= 1.0;  // [0,1)
    }
    if (u > 0.5) {
        u = 1.0 - u;  // [0,0.5]
    }
    if (u == 0.0) {
        return 0.0;
    }
    return sign * std::sin(M_PI * u);
}

// cos(pi*u) folded to [0, 1/2]; zero is exact at half-integer u.
double cos_pi_half_turns(double u) {
    u = std::fabs(u);
    u -= 2.0 * std::floor(u * 0.5);  // [0,2)
    if (u > 1.0) {
        u = 2.0 - u;  // [0,1]
    }
    double sign = 1.0;
    if (u > 0.5) {
        sign = -1.0;
        u = 1.0 - u;  // [0,0.5]
    }
    if (u == 0.5) {
        return 0.0;
    }
    return sign * std::cos(M_PI * u);
}

}  // namespace

double sin_two_pi(double x) { return sin_pi_half_turns(2.0 * x); }

double cos_two_pi(double x) { return cos_pi_half_turns(2.0 * x); }

}  // namespace kanlab
