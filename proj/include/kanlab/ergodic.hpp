// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kanlab/systems.hpp"

namespace kanlab {

struct OrbitSettings {
    long long n_transient = 1000;      // discarded iterates
    long long n_average = 1'000'000;   // averaged iterates
    std::uint64_t seed = 0;            // recorded with every estimate
};

/// Streaming orbit: pull one point at a time, never materializes the orbit.
class Orbit {
public:
    Orbit(const SkewProductSystem& sys, const PhasePoint& x0) : sys_(sys), x_(x0) {
        sys.check_point(x0);
    }

    const PhasePoint& current() const { return x_; }
    void advance() { x_ = sys_.map(x_); }

private:
    const SkewProductSystem& sys_;
    PhasePoint x_;
};

/// First n+1 orbit points, element 0 being x0.
std::vector<PhasePoint> orbit_points(const SkewProductSystem& sys, const PhasePoint& x0,
                                     long long n);

/// Compensated (Kahan) accumulator; keeps long quadrature and orbit sums
/// well below the acceptance tolerances.
class CompensatedSum {
public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

/// Finite-time Birkhoff average of an observable along the forward orbit:
/// mean over n_average iterates after n_transient burn-in.
template <typename Observable>
double birkhoff_average(const SkewProductSystem& sys, const PhasePoint& x0,
                        Observable&& observable, const OrbitSettings& s) {
    if (s.n_average < 1 || s.n_transient < 0) {
        throw std::domain_error("OrbitSettings: n_average >= 1 and n_transient >= 0 required");
    }
    Orbit orbit(sys, x0);
    for (long long i = 0; i < s.n_transient; ++i) orbit.advance();
    CompensatedSum sum;
    for (long long i = 0; i < s.n_average; ++i) {
        sum.add(observable(orbit.current()));
        if (i + 1 < s.n_average) orbit.advance();
    }
    return sum.value() / static_cast<double>(s.n_average);
}

struct LyapunovEstimate {
    double center = 0.0;                  // nats per iterate
    double base_unstable = 0.0;           // log k or log|lambda_u|, analytic
    std::optional<double> base_stable;    // -log|lambda_u| for automorphisms
    long long n_used = 0;
    double standard_error = 0.0;          // batch means, >= 20 batches
    std::uint64_t seed = 0;
};

/// Center Lyapunov exponent estimate: time average of log|d_t fiber map|
/// along the orbit of x0. Base exponents are filled analytically from the
/// base spectrum (the skew-product derivative is block triangular).
LyapunovEstimate center_lyapunov(const SkewProductSystem& sys, const PhasePoint& x0,
                                 const OrbitSettings& s);

/// Mean of log|d_t fiber map(., level)| over the base, by composite midpoint
/// quadrature. The level must be one of the system's invariant fiber levels.
double boundary_log_integral(const SkewProductSystem& sys, double level,
                             const QuadratureSettings& quad = {});

/// Seeded point on an invariant fiber level (base coordinates uniform).
PhasePoint random_point_on_level(const SkewProductSystem& sys, double level, std::uint64_t seed);

/// Seeded point with uniform base and uniform interior fiber coordinate.
PhasePoint random_phase_point(const SkewProductSystem& sys, std::uint64_t seed);

}  // namespace kanlab
