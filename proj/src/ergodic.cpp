// SPDX-License-Identifier: Apache-2.0
#include "kanlab/ergodic.hpp"

#include <cmath>
#include <stdexcept>

#include "kanlab/rng.hpp"

namespace kanlab {

std::vector<PhasePoint> orbit_points(const SkewProductSystem& sys, const PhasePoint& x0,
                                     long long n) {
    if (n < 0) {
        throw std::domain_error("orbit_points: n must be >= 0");
    }
    std::vector<PhasePoint> pts;
    pts.reserve(static_cast<size_t>(n) + 1);
    Orbit orbit(sys, x0);
    pts.push_back(orbit.current());
    for (long long i = 0; i < n; ++i) {
        orbit.advance();
        pts.push_back(orbit.current());
    }
    return pts;
}

LyapunovEstimate center_lyapunov(const SkewProductSystem& sys, const PhasePoint& x0,
                                 const OrbitSettings& s) {
    if (s.n_average < 1 || s.n_transient < 0) {
        throw std::domain_error("OrbitSettings: n_average >= 1 and n_transient >= 0 required");
    }
    Orbit orbit(sys, x0);
    for (long long i = 0; i < s.n_transient; ++i) orbit.advance();

    const long long n_batches = std::min<long long>(20, s.n_average);
    const long long batch_len = s.n_average / n_batches;
    const long long n_used = n_batches * batch_len;

    std::vector<double> batch_means;
    batch_means.reserve(static_cast<size_t>(n_batches));
    CompensatedSum total;
    for (long long b = 0; b < n_batches; ++b) {
        CompensatedSum batch;
        for (long long i = 0; i < batch_len; ++i) {
            const PhasePoint& x = orbit.current();
            batch.add(std::log(std::fabs(sys.fiber_derivative(x.base, x.fiber))));
            if (b + 1 < n_batches || i + 1 < batch_len) orbit.advance();
        }
        batch_means.push_back(batch.value() / static_cast<double>(batch_len));
        total.add(batch.value());
    }
    const double mean = total.value() / static_cast<double>(n_used);

    double stderr_est = 0.0;
    if (n_batches > 1) {
        double ss = 0.0;
        for (double m : batch_means) {
            const double d = m - mean;
            ss += d * d;
        }
        stderr_est = std::sqrt(ss / (static_cast<double>(n_batches) *
                                     static_cast<double>(n_batches - 1)));
    }

    const auto spec = sys.base_spectrum();
    LyapunovEstimate est;
    est.center = mean;
    est.base_unstable = spec.log_unstable;
    est.base_stable = spec.log_stable;
    est.n_used = n_used;
    est.standard_error = stderr_est;
    est.seed = s.seed;
    return est;
}

double boundary_log_integral(const SkewProductSystem& sys, double level,
                             const QuadratureSettings& quad) {
    if (quad.samples_1d < 16 || quad.samples_2d < 16) {
        throw std::domain_error("boundary_log_integral: quadrature resolution must be >= 16 samples per axis");
    }
    const auto levels = sys.invariant_levels();
    if (level != levels[0] && level != levels[1]) {
        throw std::domain_error("boundary_log_integral: level is not an invariant fiber level");
    }
    CompensatedSum sum;
    if (sys.base_kind() == BaseKind::ExpandingCircle) {
        const int n = quad.samples_1d;
        for (int i = 0; i < n; ++i) {
            const BasePoint b{CirclePoint((i + 0.5) / n)};
            sum.add(std::log(std::fabs(sys.fiber_derivative(b, level))));
        }
        return sum.value() / n;
    }
    const int n = quad.samples_2d;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const BasePoint b{TorusPoint((i + 0.5) / n, (j + 0.5) / n)};
            sum.add(std::log(std::fabs(sys.fiber_derivative(b, level))));
        }
    }
    return sum.value() / (static_cast<double>(n) * static_cast<double>(n));
}

PhasePoint random_point_on_level(const SkewProductSystem& sys, double level, std::uint64_t seed) {
    const auto levels = sys.invariant_levels();
    if (level != levels[0] && level != levels[1]) {
        throw std::domain_error("random_point_on_level: level is not an invariant fiber level");
    }
    SplitMix64 rng(seed);
    if (sys.base_kind() == BaseKind::ExpandingCircle) {
        return PhasePoint{CirclePoint(rng.next_unit()), level};
    }
    const double u = rng.next_unit();
    const double v = rng.next_unit();
    return PhasePoint{TorusPoint(u, v), level};
}

PhasePoint random_phase_point(const SkewProductSystem& sys, std::uint64_t seed) {
    SplitMix64 rng(seed);
    BasePoint base;
    if (sys.base_kind() == BaseKind::ExpandingCircle) {
        base = CirclePoint(rng.next_unit());
    } else {
        const double u = rng.next_unit();
        const double v = rng.next_unit();
        base = TorusPoint(u, v);
    }
    // keep the fiber coordinate strictly interior
    const double t = 0.5 + 0.998 * (rng.next_unit() - 0.5);
    return PhasePoint{base, t};
}

}  // namespace kanlab
