#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "tinj/errors.hpp"
#include "tinj/trajectory.hpp"

namespace tinj {

using complexd = std::complex<double>;

inline constexpr double kZeroAmplitudeEps = 1e-12;

/// Transversal initial state |chi> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
struct PhysicalRotation {
    double theta = 0.0;  // [0, pi]
    double phi = 0.0;    // [0, 2 pi)

    double alpha() const { return std::cos(theta / 2); }
    complexd beta() const { return std::polar(std::sin(theta / 2), phi); }
};

/// Integer-coefficient polynomial sum_j c_j alpha^(N-j) beta^j for one
/// unnormalised logical amplitude; j is the Hamming weight of the
/// contributing basis strings. Coefficient arithmetic is exact.
struct AmplitudePoly {
    int n = 0;                          // total data-qubit count N
    std::vector<std::int64_t> coeffs;   // size n+1, index j

    static AmplitudePoly zero(int n) {
        return AmplitudePoly{n, std::vector<std::int64_t>(static_cast<std::size_t>(n) + 1, 0)};
    }

    bool is_zero() const {
        return std::all_of(coeffs.begin(), coeffs.end(), [](std::int64_t c) { return c == 0; });
    }

    complexd evaluate(const PhysicalRotation& rot) const {
        const double a = rot.alpha();
        const complexd b = rot.beta();
        // alpha powers descending, beta powers ascending
        std::vector<double> apow(static_cast<std::size_t>(n) + 1, 1.0);
        for (int k = 1; k <= n; ++k) apow[k] = apow[k - 1] * a;
        complexd bpow = 1.0;
        complexd acc = 0.0;
        for (int j = 0; j <= n; ++j) {
            if (coeffs[j] != 0) acc += static_cast<double>(coeffs[j]) * apow[n - j] * bpow;
            bpow *= b;
        }
        return acc;
    }
};

inline complexd evaluate(const AmplitudePoly& poly, const PhysicalRotation& rot) {
    return poly.evaluate(rot);
}

/// Exact unnormalised (alpha_L, beta_L) pair for one stabiliser trajectory.
struct LogicalStateForm {
    AmplitudePoly alpha_poly;
    AmplitudePoly beta_poly;
    Trajectory trajectory;
};

/// Unit-norm amplitude pair at a rotation, global phase fixed so the first
/// component above threshold is real positive. Throws ZeroStateError when
/// the trajectory is impossible at this rotation.
inline std::pair<complexd, complexd> normalize(const LogicalStateForm& form,
                                               const PhysicalRotation& rot) {
    complexd a = form.alpha_poly.evaluate(rot);
    complexd b = form.beta_poly.evaluate(rot);
    if (std::abs(a) < kZeroAmplitudeEps && std::abs(b) < kZeroAmplitudeEps)
        throw ZeroStateError("trajectory " + form.trajectory.to_string() +
                             " is impossible at this rotation");
    const double norm = std::sqrt(std::norm(a) + std::norm(b));
    a /= norm;
    b /= norm;
    const complexd lead = std::abs(a) >= kZeroAmplitudeEps ? a : b;
    const complexd phase = lead / std::abs(lead);
    return {a / phase, b / phase};
}

/// Resultant logical state on the Bloch sphere.
struct BlochPoint {
    double theta_l = 0.0;  // [0, pi]
    double phi_l = 0.0;    // (-pi, pi]
};

inline double wrap_angle(double phi) {
    phi = std::remainder(phi, 2 * std::numbers::pi);
    if (phi <= -std::numbers::pi) phi += 2 * std::numbers::pi;
    return phi;
}

inline BlochPoint to_bloch(const LogicalStateForm& form, const PhysicalRotation& rot) {
    auto [a, b] = normalize(form, rot);
    BlochPoint p;
    p.theta_l = 2 * std::acos(std::clamp(std::abs(a), 0.0, 1.0));
    if (std::abs(a) >= kZeroAmplitudeEps && std::abs(b) >= kZeroAmplitudeEps)
        p.phi_l = wrap_angle(std::arg(b) - std::arg(a));
    return p;
}

/// ||P_trajectory |chi>^N||^2. The coset-side collection convention (each
/// consistent basis string contributes once with sign +-1) leaves exactly
/// one factor 2^(-n_x) from the X-projector chain.
inline double trajectory_probability(const LogicalStateForm& form, const PhysicalRotation& rot) {
    const complexd a = form.alpha_poly.evaluate(rot);
    const complexd b = form.beta_poly.evaluate(rot);
    return std::ldexp(std::norm(a) + std::norm(b), -form.trajectory.n_x);
}

/// Ancilla target for teleported rotations: equatorial gives
/// (|0> + e^{i angle}|1>)/sqrt(2), polar_real gives cos(angle)|0> + i sin(angle)|1>.
struct TeleportTarget {
    enum class Kind { equatorial, polar_real };
    Kind kind = Kind::equatorial;
    double angle = 0.0;

    std::pair<complexd, complexd> amplitudes() const {
        if (kind == Kind::equatorial)
            return {complexd{std::numbers::sqrt2 / 2, 0}, std::polar(std::numbers::sqrt2 / 2, angle)};
        return {complexd{std::cos(angle), 0}, complexd{0, std::sin(angle)}};
    }
};

/// Inclusive rectangular rotation grid; a count of 1 pins the axis at min.
struct RotationGrid {
    double theta_min = 0.0, theta_max = std::numbers::pi;
    int theta_count = 1;
    double phi_min = 0.0, phi_max = 2 * std::numbers::pi;
    int phi_count = 1;

    std::vector<PhysicalRotation> points() const {
        std::vector<PhysicalRotation> out;
        out.reserve(static_cast<std::size_t>(theta_count) * phi_count);
        for (int i = 0; i < theta_count; ++i) {
            const double th = theta_count == 1
                                  ? theta_min
                                  : theta_min + i * (theta_max - theta_min) / (theta_count - 1);
            for (int k = 0; k < phi_count; ++k) {
                const double ph = phi_count == 1
                                      ? phi_min
                                      : phi_min + k * (phi_max - phi_min) / (phi_count - 1);
                out.push_back({th, ph});
            }
        }
        return out;
    }
};

struct TeleportMatch {
    Trajectory trajectory;
    PhysicalRotation rotation;
    double residual = 0.0;
};

/// Grid search for (trajectory, rotation) pairs whose normalised state is
/// within `threshold` of the target; residual = 1 - |<target|state>|^2.
/// Results ascend by residual. Throws EmptyResultError when nothing
/// qualifies.
inline std::vector<TeleportMatch> match_teleportation_target(
    std::span<const LogicalStateForm> forms, const TeleportTarget& target,
    const RotationGrid& grid, double threshold = 1e-6) {
    if (forms.empty()) throw EmptyResultError("no candidate forms supplied");
    const auto [ta, tb] = target.amplitudes();
    std::vector<TeleportMatch> hits;
    for (const PhysicalRotation& rot : grid.points()) {
        for (const LogicalStateForm& form : forms) {
            complexd a, b;
            try {
                std::tie(a, b) = normalize(form, rot);
            } catch (const ZeroStateError&) {
                continue;
            }
            const double overlap = std::norm(std::conj(ta) * a + std::conj(tb) * b);
            const double residual = 1.0 - overlap;
            if (residual <= threshold) hits.push_back({form.trajectory, rot, residual});
        }
    }
    if (hits.empty()) throw EmptyResultError("no (trajectory, rotation) pair under residual threshold");
    std::stable_sort(hits.begin(), hits.end(),
                     [](const TeleportMatch& l, const TeleportMatch& r) { return l.residual < r.residual; });
    return hits;
}

}  // namespace tinj
