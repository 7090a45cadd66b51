#ifndef GMI_SCATTERERS_HPP
#define GMI_SCATTERERS_HPP

#include <cmath>
#include <numbers>

#include "core.hpp"

namespace gmi {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Reduce an angle to the canonical interval (-pi, pi].
inline double wrap_angle(double x) {
    if (!std::isfinite(x))
        throw invalid_parameter("phase must be finite");
    double y = std::remainder(x, two_pi);
    if (y <= -pi) y += two_pi;
    return y;
}

/// Splitting amplitudes and per-pass power loss of one beam-splitter.
/// The amplitudes describe the splitting alone (|r|^2 + |t|^2 = 1 for a
/// lossless cube); attenuation enters separately through `loss`.
struct BeamSplitterParams {
    amplitude r_amp{1.0 / std::numbers::sqrt2, 0.0};
    amplitude t_amp{1.0 / std::numbers::sqrt2, 0.0};
    double loss = 0.0;

    static BeamSplitterParams ideal() { return {}; }

    // Power reflectance in [0, 1]; transmittance is the complement.
    static BeamSplitterParams from_reflectance(double reflectance, double loss = 0.0) {
        if (!std::isfinite(reflectance) || reflectance < 0.0 || reflectance > 1.0)
            throw invalid_parameter("reflectance must lie in [0, 1]");
        BeamSplitterParams p;
        p.r_amp = amplitude(std::sqrt(reflectance), 0.0);
        p.t_amp = amplitude(std::sqrt(1.0 - reflectance), 0.0);
        p.loss = loss;
        p.validate();
        return p;
    }

    void validate() const {
        if (!finite_amplitude(r_amp) || !finite_amplitude(t_amp) || !std::isfinite(loss))
            throw invalid_parameter("beam-splitter parameters must be finite");
        if (std::norm(r_amp) + std::norm(t_amp) > 1.0 + 1e-12)
            throw invalid_parameter("|r|^2 + |t|^2 exceeds 1");
        if (loss < 0.0 || loss >= 1.0)
            throw invalid_parameter("loss must lie in [0, 1)");
    }
};

/// Internal phases of the two-splitter coin network: mirror-arm round trips
/// theta1 (left) and theta2 (right), and the bridge crossing theta. Stored
/// reduced to (-pi, pi].
struct CoinPhases {
    double theta1 = 0.0;
    double theta2 = 0.0;
    double theta = 0.0;

    CoinPhases() = default;
    CoinPhases(double t1, double t2, double t)
        : theta1(wrap_angle(t1)), theta2(wrap_angle(t2)), theta(wrap_angle(t)) {}
};

/// Four-port beam-splitter matrix. Transmission couples ports 1<->3 and
/// 2<->4, reflection couples 1<->4 and 2<->3. The pi phase of the splitting
/// convention sits on the 2<->4 element, which keeps the balanced matrix
/// real. Loss scales both output amplitudes by sqrt(1 - loss) per pass.
inline ScatteringMatrix beam_splitter(const BeamSplitterParams& p) {
    p.validate();
    const double scale = std::sqrt(1.0 - p.loss);
    const amplitude t = p.t_amp * scale;
    const amplitude r = p.r_amp * scale;
    ScatteringMatrix s(4);
    s.set(0, 2, t);
    s.set(2, 0, t);
    s.set(0, 3, r);
    s.set(3, 0, r);
    s.set(1, 2, r);
    s.set(2, 1, r);
    s.set(1, 3, -t);
    s.set(3, 1, -t);
    return s;
}

/// The balanced directionally-unbiased four-port coin, (J - 2I)/2 with J the
/// all-ones matrix: every input excites all four ports with probability 1/4,
/// the back-reflected share with a sign flip.
inline ScatteringMatrix grover_coin() {
    ScatteringMatrix g(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            g.set(i, j, amplitude(i == j ? -0.5 : 0.5, 0.0));
    return g;
}

/// Coin of the two-splitter network with all three internal phases kept.
/// Block structure: the 2x2 diagonal blocks carry exp(i*theta1) and
/// exp(i*theta2) on the balanced splitting pattern, the off-diagonal blocks
/// carry exp(i*theta)/2 everywhere. At (0, 0, 0) this is exactly the
/// balanced coin.
inline ScatteringMatrix generalized_coin(const CoinPhases& ph) {
    const amplitude d1 = 0.5 * std::polar(1.0, ph.theta1);
    const amplitude d2 = 0.5 * std::polar(1.0, ph.theta2);
    const amplitude br = 0.5 * std::polar(1.0, ph.theta);
    ScatteringMatrix g(4);
    g.set(0, 0, -d1);
    g.set(0, 1, d1);
    g.set(1, 0, d1);
    g.set(1, 1, -d1);
    g.set(2, 2, -d2);
    g.set(2, 3, d2);
    g.set(3, 2, d2);
    g.set(3, 3, -d2);
    for (int i = 0; i < 2; ++i) {
        for (int j = 2; j < 4; ++j) {
            g.set(i, j, br);
            g.set(j, i, br);
        }
    }
    return g;
}

/// Coin with the mirror-arm phases absorbed into external shifts: only the
/// (translated) bridge phase remains.
inline ScatteringMatrix bridge_coin(double theta) {
    return generalized_coin(CoinPhases(0.0, 0.0, theta));
}

struct ReducedCoin {
    ScatteringMatrix matrix;
    double theta_eff;
};

/// Absorb theta1/theta2 into unmeasurable external phase shifts,
/// exp(-i*theta1/2) on ports 1,2 and exp(-i*theta2/2) on ports 3,4. The
/// bridge phase translates to theta - (theta1 + theta2)/2, reduced to
/// (-pi, pi].
inline ReducedCoin reduce_phases(const CoinPhases& ph) {
    const double theta_eff = wrap_angle(ph.theta - 0.5 * (ph.theta1 + ph.theta2));
    return {bridge_coin(theta_eff), theta_eff};
}

/// Amplitude trace through the two-splitter, two-mirror, one-bridge network.
/// Every input-output pair is a single two-encounter path: either into a
/// mirror arm and back out through the same splitter (round trip
/// exp(i*theta_k); the pi contributions of the arm-side reflection and of
/// the end mirror cancel), or across the bridge (one crossing,
/// exp(i*theta)). Reflections on the mirror-arm side of a splitter carry
/// the pi sign; reflections on the bridge side do not. No path re-enters an
/// arm, so nothing interferes inside the device.
inline ScatteringMatrix compose_network(const BeamSplitterParams& bs1,
                                        const BeamSplitterParams& bs2,
                                        const CoinPhases& ph) {
    bs1.validate();
    bs2.validate();
    const amplitude r1 = bs1.r_amp * std::sqrt(1.0 - bs1.loss);
    const amplitude t1 = bs1.t_amp * std::sqrt(1.0 - bs1.loss);
    const amplitude r2 = bs2.r_amp * std::sqrt(1.0 - bs2.loss);
    const amplitude t2 = bs2.t_amp * std::sqrt(1.0 - bs2.loss);
    const amplitude arm1 = std::polar(1.0, ph.theta1);
    const amplitude arm2 = std::polar(1.0, ph.theta2);
    const amplitude bridge = std::polar(1.0, ph.theta);

    ScatteringMatrix s(4);
    // input 1: reflect into arm 1 and back (extra pi on the reflection out
    // to port 1), or transmit across the bridge and split at splitter 2
    s.set(0, 0, -r1 * r1 * arm1);
    s.set(1, 0, r1 * t1 * arm1);
    s.set(2, 0, t1 * t2 * bridge);
    s.set(3, 0, t1 * r2 * bridge);
    // input 2: transmit into arm 1 and back, or reflect onto the bridge
    s.set(0, 1, t1 * r1 * arm1);
    s.set(1, 1, -t1 * t1 * arm1);
    s.set(2, 1, r1 * t2 * bridge);
    s.set(3, 1, r1 * r2 * bridge);
    // input 3: mirror image of input 1 on splitter 2
    s.set(0, 2, t2 * t1 * bridge);
    s.set(1, 2, t2 * r1 * bridge);
    s.set(2, 2, -r2 * r2 * arm2);
    s.set(3, 2, r2 * t2 * arm2);
    // input 4: mirror image of input 2 on splitter 2
    s.set(0, 3, r2 * t1 * bridge);
    s.set(1, 3, r2 * r1 * bridge);
    s.set(2, 3, t2 * r2 * arm2);
    s.set(3, 3, -t2 * t2 * arm2);
    return s;
}

} // namespace gmi

#endif // GMI_SCATTERERS_HPP
