#ifndef GMI_RESONATOR_HPP
#define GMI_RESONATOR_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "format.hpp"
#include "scatterers.hpp"

namespace gmi {

/// Output amplitudes of the interferometer: r back out of the input port,
/// t out of the other external port.
struct GmiAmplitudes {
    amplitude r{0.0, 0.0};
    amplitude t{0.0, 0.0};

    double reflection_probability() const { return std::norm(r); }
    double transmission_probability() const { return std::norm(t); }
};

/// One interferometer instance: a four-port coin with mirrors sealing ports
/// 3 and 4. phi1/phi2 are the round-trip arm phases, arm_loss the per-round-
/// trip power loss of each arm. The coin defaults to the reduced coin at the
/// given bridge phase; any four-port matrix (e.g. a composed imbalanced
/// network) can be substituted.
struct GmiConfig {
    double phi1 = 0.0;
    double phi2 = 0.0;
    double theta = 0.0;
    ScatteringMatrix coin;
    std::array<double, 2> arm_loss{0.0, 0.0};

    GmiConfig(double arm1_phase, double arm2_phase, double bridge_theta = 0.0)
        : phi1(arm1_phase), phi2(arm2_phase), theta(bridge_theta),
          coin(bridge_coin(bridge_theta)) {
        validate();
    }

    GmiConfig(double arm1_phase, double arm2_phase, double bridge_theta,
              ScatteringMatrix custom_coin, std::array<double, 2> loss = {0.0, 0.0})
        : phi1(arm1_phase), phi2(arm2_phase), theta(bridge_theta),
          coin(std::move(custom_coin)), arm_loss(loss) {
        validate();
    }

    void validate() const {
        if (!std::isfinite(phi1) || !std::isfinite(phi2) || !std::isfinite(theta))
            throw invalid_parameter("arm/bridge phases must be finite");
        if (coin.dim() != 4)
            throw dimension_error("interferometer coin must be a four-port matrix");
        for (double l : arm_loss)
            if (!std::isfinite(l) || l < 0.0 || l >= 1.0)
                throw invalid_parameter("arm loss must lie in [0, 1)");
    }
};

/// Result of the explicit round-trip simulation. `residual` is the Euclidean
/// norm of the amplitude still circulating in the arms. `converged` holds
/// only when the residual fell below the requested tolerance AND the
/// round-trip map is a contraction (spectral radius < 1); at a lossless
/// resonance the circulating power can drain in finitely many trips even
/// though the geometric-series ratio has modulus one, and the flag stays
/// false while the accumulated amplitudes remain valid.
struct RoundTripReport {
    GmiAmplitudes amplitudes;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

/// Arm-sum and arm-difference coefficients,
/// B = (e^{i phi1} + e^{i phi2})/2 and C = (e^{i phi1} - e^{i phi2})/2.
/// They are the reflection and transmission amplitudes of a plain Michelson
/// with the same arms, and |B|^2 + |C|^2 = 1.
inline std::pair<amplitude, amplitude> b_c_coefficients(double phi1, double phi2) {
    const amplitude e1 = std::polar(1.0, phi1);
    const amplitude e2 = std::polar(1.0, phi2);
    return {0.5 * (e1 + e2), 0.5 * (e1 - e2)};
}

/// Closed-form output of the zero-bridge-phase interferometer:
/// r = C^2/(2B - 2) - B/2 - 1/2 and t = r + 1. Valid for the balanced coin
/// only. At the degenerate point B = 1 (both arm phases at 0 mod 2pi) the
/// quotient is 0/0; the value returned is the limit along the C = 0 family,
/// r = -(B + 1)/2, t = (1 - B)/2, i.e. (-1, 0).
inline GmiAmplitudes gmi_closed_form(double phi1, double phi2) {
    const auto [b, c] = b_c_coefficients(phi1, phi2);
    const amplitude den = 2.0 * b - 2.0;
    if (std::abs(den) <= 1e-12)
        return {-0.5 * (b + 1.0), 0.5 * (1.0 - b)};
    const amplitude x = c * c / den - 0.5 * b;
    return {x - 0.5, x + 0.5};
}

/// Plain Michelson with the same arm phases: (r, t) = (B, C), so the
/// reflection probability is cos^2((phi1 - phi2)/2).
inline GmiAmplitudes michelson_reference(double phi1, double phi2) {
    const auto [b, c] = b_c_coefficients(phi1, phi2);
    return {b, c};
}

namespace detail {

// Per-round-trip factor of one arm: -e^{i phi} sqrt(1 - loss). The minus
// sign is the mirror bookkeeping for the external arms.
inline amplitude arm_factor(double phi, double loss) {
    return -std::polar(std::sqrt(1.0 - loss), phi);
}

inline std::pair<amplitude, amplitude> eigenvalues_2x2(const ScatteringMatrix& m) {
    const amplitude tr = m(0, 0) + m(1, 1);
    const amplitude det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const amplitude disc = std::sqrt(tr * tr - 4.0 * det);
    return {0.5 * (tr + disc), 0.5 * (tr - disc)};
}

inline double spectral_radius_2x2(const ScatteringMatrix& m) {
    const auto [l1, l2] = eigenvalues_2x2(m);
    return std::max(std::abs(l1), std::abs(l2));
}

} // namespace detail

/// One round trip of the circulating arm amplitudes: the mirror/phase step
/// of both arms followed by the internal (ports 3,4) block of the coin.
inline ScatteringMatrix round_trip_matrix(const GmiConfig& cfg) {
    cfg.validate();
    const amplitude f1 = detail::arm_factor(cfg.phi1, cfg.arm_loss[0]);
    const amplitude f2 = detail::arm_factor(cfg.phi2, cfg.arm_loss[1]);
    ScatteringMatrix m(2);
    m.set(0, 0, cfg.coin(2, 2) * f1);
    m.set(0, 1, cfg.coin(2, 3) * f2);
    m.set(1, 0, cfg.coin(3, 2) * f1);
    m.set(1, 1, cfg.coin(3, 3) * f2);
    return m;
}

/// Explicit round-trip simulation: inject unit amplitude at the input port,
/// let the coin scatter it, accumulate whatever exits ports 1,2 and send the
/// ports-3,4 share through the arms again. Stops once the circulating norm
/// drops to `tol` or after `max_n` trips; exhaustion is reported through
/// `converged`, not an exception.
inline RoundTripReport iterate_round_trips(const GmiConfig& cfg, int input_port,
                                           int max_n = 100000, double tol = 1e-10) {
    cfg.validate();
    if (input_port != 1 && input_port != 2)
        throw invalid_parameter("input port must be 1 or 2");
    if (max_n < 1)
        throw invalid_parameter("max_n must be at least 1");
    if (!(tol > 0.0))
        throw invalid_parameter("tolerance must be positive");

    const amplitude f1 = detail::arm_factor(cfg.phi1, cfg.arm_loss[0]);
    const amplitude f2 = detail::arm_factor(cfg.phi2, cfg.arm_loss[1]);

    OpticalState psi = apply(cfg.coin, OpticalState::unit_input(4, input_port));
    amplitude out1 = psi[0];
    amplitude out2 = psi[1];
    amplitude c1 = psi[2];
    amplitude c2 = psi[3];
    double residual = std::sqrt(std::norm(c1) + std::norm(c2));

    int trips = 0;
    while (trips < max_n && residual > tol) {
        ++trips;
        OpticalState circulating(4);
        circulating.set(2, f1 * c1);
        circulating.set(3, f2 * c2);
        psi = apply(cfg.coin, circulating);
        out1 += psi[0];
        out2 += psi[1];
        c1 = psi[2];
        c2 = psi[3];
        residual = std::sqrt(std::norm(c1) + std::norm(c2));
    }

    const bool contraction = detail::spectral_radius_2x2(round_trip_matrix(cfg)) < 1.0;
    GmiAmplitudes amps = (input_port == 1) ? GmiAmplitudes{out1, out2}
                                           : GmiAmplitudes{out2, out1};
    return {amps, trips, residual, residual <= tol && contraction};
}

/// Exact geometric-series sum of the round trips:
/// out = S_ee + S_ei Phi (I - S_ii Phi)^{-1} S_ie on the external/internal
/// port partition {1,2}/{3,4}. Works for any bridge phase and lossy coins.
/// Throws at resonant configurations where I - S_ii Phi is singular.
inline GmiAmplitudes steady_state(const GmiConfig& cfg, int input_port = 1) {
    cfg.validate();
    if (input_port != 1 && input_port != 2)
        throw invalid_parameter("input port must be 1 or 2");

    const ScatteringMatrix& s = cfg.coin;
    const amplitude f1 = detail::arm_factor(cfg.phi1, cfg.arm_loss[0]);
    const amplitude f2 = detail::arm_factor(cfg.phi2, cfg.arm_loss[1]);
    const int p = input_port - 1;

    // internal source after the first coin pass
    const amplitude v1 = s(2, p);
    const amplitude v2 = s(3, p);

    // I - S_ii Phi
    const amplitude a = 1.0 - s(2, 2) * f1;
    const amplitude b = -s(2, 3) * f2;
    const amplitude c = -s(3, 2) * f1;
    const amplitude d = 1.0 - s(3, 3) * f2;
    const amplitude det = a * d - b * c;
    if (std::abs(det) <= 1e-12)
        throw resonance_error(cfg.phi1, cfg.phi2,
                              "resonant phase configuration phi1=" + format_sci(cfg.phi1) +
                              ", phi2=" + format_sci(cfg.phi2) +
                              ": I - S_ii*Phi is singular");

    const amplitude x1 = (d * v1 - b * v2) / det;
    const amplitude x2 = (a * v2 - c * v1) / det;
    const amplitude w1 = f1 * x1;
    const amplitude w2 = f2 * x2;
    const amplitude out1 = s(0, p) + s(0, 2) * w1 + s(0, 3) * w2;
    const amplitude out2 = s(1, p) + s(1, 2) * w1 + s(1, 3) * w2;
    return (input_port == 1) ? GmiAmplitudes{out1, out2} : GmiAmplitudes{out2, out1};
}

struct RoundTripMode {
    amplitude value;
    OpticalState vector; // over the internal (arm) ports 3, 4
};

struct RoundTripModes {
    std::vector<RoundTripMode> modes; // sorted by descending |value|
    bool defective = false;
};

namespace detail {

// Unit-normalize with a deterministic phase: the largest-magnitude component
// is rotated to the positive real axis.
inline OpticalState normalized_mode(amplitude x, amplitude y) {
    const double n = std::sqrt(std::norm(x) + std::norm(y));
    if (n == 0.0)
        throw error("degenerate eigenvector candidate");
    x /= n;
    y /= n;
    const amplitude lead = (std::abs(x) >= std::abs(y)) ? x : y;
    const amplitude phase = std::conj(lead) / std::abs(lead);
    OpticalState v(2);
    v.set(0, x * phase);
    v.set(1, y * phase);
    return v;
}

inline OpticalState eigenvector_2x2(const ScatteringMatrix& m, amplitude lambda) {
    // kernel of (M - lambda I), from whichever row is better conditioned
    const amplitude u1 = m(0, 1), u2 = lambda - m(0, 0);
    const amplitude w1 = lambda - m(1, 1), w2 = m(1, 0);
    const double nu = std::norm(u1) + std::norm(u2);
    const double nw = std::norm(w1) + std::norm(w2);
    if (nu >= nw)
        return normalized_mode(u1, u2);
    return normalized_mode(w1, w2);
}

} // namespace detail

/// Eigen-decomposition of the 2x2 round-trip matrix, eigenvalues sorted by
/// descending modulus. A defective (non-diagonalizable) matrix yields the
/// single eigenvector found plus `defective = true`.
inline RoundTripModes round_trip_eigenmodes(const GmiConfig& cfg) {
    const ScatteringMatrix m = round_trip_matrix(cfg);
    auto [l1, l2] = detail::eigenvalues_2x2(m);
    if (std::abs(l2) > std::abs(l1)) std::swap(l1, l2);

    double scale = std::abs(l1);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) scale = std::max(scale, std::abs(m(i, j)));
    const double eps = 1e-12 * std::max(1.0, scale);

    RoundTripModes out;
    if (std::abs(l1 - l2) <= eps) {
        // repeated eigenvalue: scalar matrix or a genuine Jordan block
        double off = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                off = std::max(off, std::abs(m(i, j) - (i == j ? l1 : amplitude(0.0, 0.0))));
        if (off <= eps) {
            out.modes.push_back({l1, OpticalState{amplitude(1.0, 0.0), amplitude(0.0, 0.0)}});
            out.modes.push_back({l2, OpticalState{amplitude(0.0, 0.0), amplitude(1.0, 0.0)}});
        } else {
            out.modes.push_back({l1, detail::eigenvector_2x2(m, l1)});
            out.defective = true;
        }
        return out;
    }
    out.modes.push_back({l1, detail::eigenvector_2x2(m, l1)});
    out.modes.push_back({l2, detail::eigenvector_2x2(m, l2)});
    return out;
}

} // namespace gmi

#endif // GMI_RESONATOR_HPP
