#ifndef GMI_VERIFY_HPP
#define GMI_VERIFY_HPP

#include <random>
#include <string>
#include <vector>

#include "metrics.hpp"

namespace gmi {

struct PropertyResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace detail {

inline double entrywise_distance(const ScatteringMatrix& a, const ScatteringMatrix& b) {
    double worst = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j)
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    return worst;
}

inline std::vector<double> phase_grid(int n) {
    // quarter-cell offset keeps grid pairs away from exact resonances
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) g.push_back(-pi + (k + 0.25) * two_pi / n);
    return g;
}

} // namespace detail

/// Machine-checked counterparts of the library's documented invariants.
/// `grid` controls the phase-grid density (default 10 per axis).
inline std::vector<PropertyResult> run_property_suite(int grid = 10) {
    if (grid < 2)
        throw invalid_parameter("property grid must be at least 2");
    std::vector<PropertyResult> out;
    const auto axis = detail::phase_grid(grid);
    std::mt19937 rng(20240615u);
    std::uniform_real_distribution<double> angle(-pi, pi);

    auto record = [&](const std::string& name, double worst, double tol) {
        out.push_back({name, worst <= tol,
                       "max deviation " + format_sci(worst) + " (tol " + format_sci(tol) + ")"});
    };

    { // generalized coin is unitary for every phase triple
        double worst = 0.0;
        for (double a : axis)
            for (double b : axis)
                for (double c : axis)
                    worst = std::max(worst, unitarity_defect(generalized_coin({a, b, c})));
        record("generalized-coin-unitary", worst, 1e-12);
    }
    { // network composition reproduces the coin matrix
        const auto ideal = BeamSplitterParams::ideal();
        double worst = 0.0;
        for (double a : axis)
            for (double b : axis)
                for (double c : axis)
                    worst = std::max(worst,
                                     detail::entrywise_distance(
                                         compose_network(ideal, ideal, {a, b, c}),
                                         generalized_coin({a, b, c})));
        record("compose-matches-coin", worst, 1e-12);
    }
    { // phases never move probability: every entry stays 1/4
        double worst = 0.0;
        for (double a : axis)
            for (double b : axis)
                for (double c : axis) {
                    const auto p = probability_matrix(generalized_coin({a, b, c}));
                    for (int i = 0; i < 4; ++i)
                        for (int j = 0; j < 4; ++j)
                            worst = std::max(worst, std::abs(p(i, j) - 0.25));
                }
        record("coin-probabilities-quarter", worst, 1e-12);
    }
    { // external phase absorption: D G D equals the reduced coin
        double worst = 0.0;
        for (double a : axis)
            for (double b : axis)
                for (double c : axis) {
                    const CoinPhases ph(a, b, c);
                    const auto red = reduce_phases(ph);
                    const auto g = generalized_coin(ph);
                    const amplitude d1 = std::polar(1.0, -0.5 * ph.theta1);
                    const amplitude d2 = std::polar(1.0, -0.5 * ph.theta2);
                    ScatteringMatrix dgd(4);
                    for (int i = 0; i < 4; ++i)
                        for (int j = 0; j < 4; ++j) {
                            const amplitude li = (i < 2) ? d1 : d2;
                            const amplitude rj = (j < 2) ? d1 : d2;
                            dgd.set(i, j, li * g(i, j) * rj);
                        }
                    worst = std::max(worst, detail::entrywise_distance(dgd, red.matrix));
                }
        record("phase-absorption", worst, 1e-12);
    }
    { // 180-degree rotation symmetry when theta1 == theta2
        double worst = 0.0;
        const int swap[4] = {2, 3, 0, 1};
        for (double a : axis)
            for (double c : axis) {
                const auto g = generalized_coin({a, a, c});
                for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < 4; ++j)
                        worst = std::max(worst, std::abs(g(i, j) - g(swap[i], swap[j])));
            }
        record("rotation-symmetry", worst, 1e-12);
    }
    { // lossless closed form conserves energy
        double worst = 0.0;
        for (int k = 0; k < 10000; ++k) {
            const auto a = gmi_closed_form(angle(rng), angle(rng));
            worst = std::max(worst, std::abs(a.reflection_probability() +
                                             a.transmission_probability() - 1.0));
        }
        record("closed-form-energy", worst, 1e-12);
    }
    { // the three output routes agree away from resonance
        double worst = 0.0;
        for (double p1 : axis) {
            for (double p2 : axis) {
                const auto [b, c] = b_c_coefficients(p1, p2);
                (void)c;
                if (std::abs(b) > 0.999) continue;
                const GmiConfig cfg(p1, p2);
                const auto cf = gmi_closed_form(p1, p2);
                const auto ss = steady_state(cfg, 1);
                const auto it = iterate_round_trips(cfg, 1).amplitudes;
                worst = std::max({worst, std::abs(cf.r - ss.r), std::abs(cf.t - ss.t),
                                  std::abs(cf.r - it.r), std::abs(cf.t - it.t)});
            }
        }
        record("oracle-equivalence", worst, 1e-9);
    }
    { // exchanging the arm phases leaves the output unchanged
        bool exact = true;
        for (int k = 0; k < 200; ++k) {
            const double p1 = angle(rng), p2 = angle(rng);
            const auto a = gmi_closed_form(p1, p2);
            const auto b = gmi_closed_form(p2, p1);
            if (a.r != b.r || a.t != b.t) exact = false;
        }
        out.push_back({"exchange-symmetry", exact,
                       exact ? "bit-exact over 200 random pairs" : "mismatch found"});
    }
    { // relabeling the external ports permutes the outputs
        double worst = 0.0;
        for (double p1 : axis)
            for (double p2 : axis) {
                const auto [b, c] = b_c_coefficients(p1, p2);
                (void)c;
                if (std::abs(b) > 0.999) continue;
                const GmiConfig cfg(p1, p2);
                const auto s1 = steady_state(cfg, 1);
                const auto s2 = steady_state(cfg, 2);
                worst = std::max({worst, std::abs(std::abs(s1.r) - std::abs(s2.r)),
                                  std::abs(std::abs(s1.t) - std::abs(s2.t))});
            }
        record("port-permutation", worst, 1e-12);
    }
    { // the arm-difference vector is a round-trip eigenmode with eigenvalue B
        double worst = 0.0;
        const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
        for (int k = 0; k < 100; ++k) {
            const double p1 = angle(rng), p2 = angle(rng);
            const auto m = round_trip_matrix(GmiConfig(p1, p2));
            const auto [b, c] = b_c_coefficients(p1, p2);
            (void)c;
            OpticalState v{amplitude(inv_sqrt2, 0.0), amplitude(-inv_sqrt2, 0.0)};
            const OpticalState mv = apply(m, v);
            worst = std::max({worst, std::abs(mv[0] - b * v[0]), std::abs(mv[1] - b * v[1])});
        }
        record("supermode", worst, 1e-12);
    }
    { // full reflection along phi1 = 0, any phi2
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            const double p2 = -pi + (k + 0.5) * two_pi / 1000;
            worst = std::max(worst,
                             std::abs(gmi_closed_form(0.0, p2).reflection_probability() - 1.0));
        }
        record("full-reflection-locus", worst, 1e-12);
    }
    { // nonzero bridge phase still conserves energy (lossless coin)
        double worst = 0.0;
        for (double p1 : axis)
            for (double p2 : axis) {
                const GmiConfig cfg(p1, p2, 1.1);
                try {
                    const auto s = steady_state(cfg, 1);
                    worst = std::max(worst, std::abs(s.reflection_probability() +
                                                     s.transmission_probability() - 1.0));
                } catch (const resonance_error&) {
                }
            }
        record("bridge-phase-energy", worst, 1e-12);
    }
    { // the plain-Michelson slope ceiling
        SweepSpec spec;
        spec.phi2 = pi;
        spec.model = SweepModel::michelson;
        spec.phi1_start = 0.0;
        spec.phi1_end = two_pi;
        spec.points = 2001;
        const double worst = std::abs(max_slope(sweep(spec)).slope - 0.5);
        record("michelson-slope-half", worst, 1e-4);
    }
    { // narrowing phi2 strictly sharpens the curve
        const double ladder[] = {pi, 2.0, 1.0, 0.5, 0.25};
        double prev = 0.0;
        bool increasing = true;
        for (double phi2 : ladder) {
            SweepSpec spec;
            spec.phi2 = phi2;
            spec.phi1_start = -pi;
            spec.phi1_end = pi;
            spec.points = 2001;
            const double s = refined_max_slope(spec).slope;
            if (s <= prev) increasing = false;
            prev = s;
        }
        out.push_back({"monotone-sharpening", increasing,
                       increasing ? "slope strictly increases along the phi2 ladder"
                                  : "ladder not strictly increasing"});
    }
    { // column renormalization is idempotent and ratio-preserving
        std::uniform_real_distribution<double> entry(0.05, 0.3);
        double worst = 0.0;
        for (int k = 0; k < 50; ++k) {
            ProbabilityMatrix::Entries e{};
            for (auto& v : e) v = entry(rng);
            const auto p = ProbabilityMatrix::from_entries(e);
            const auto q = renormalize_columns(p);
            const auto q2 = renormalize_columns(q);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    worst = std::max(worst, std::abs(q2(i, j) - q(i, j)));
            for (int j = 0; j < 4; ++j)
                for (int i = 1; i < 4; ++i)
                    worst = std::max(worst, std::abs(q(i, j) / q(0, j) - p(i, j) / p(0, j)));
        }
        record("renormalize-idempotent", worst, 1e-12);
    }
    { // predicted probabilities ignore the internal phases
        std::uniform_real_distribution<double> refl(0.4, 0.6);
        double worst = 0.0;
        const auto bs1 = BeamSplitterParams::from_reflectance(refl(rng), 0.01);
        const auto bs2 = BeamSplitterParams::from_reflectance(refl(rng), 0.02);
        const auto base = predict_probability_matrix(bs1, bs2, CoinPhases());
        for (int k = 0; k < 5; ++k) {
            const auto p = predict_probability_matrix(
                bs1, bs2, CoinPhases(angle(rng), angle(rng), angle(rng)));
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    worst = std::max(worst, std::abs(p(i, j) - base(i, j)));
        }
        record("predict-phase-invariant", worst, 1e-12);
    }
    { // calibration recovers known parameters
        std::uniform_real_distribution<double> refl(0.42, 0.58);
        std::uniform_real_distribution<double> loss(0.0, 0.08);
        double worst = 0.0;
        for (int k = 0; k < 3; ++k) {
            const double r1 = refl(rng), l1 = loss(rng), r2 = refl(rng), l2 = loss(rng);
            const auto truth = predict_probability_matrix(
                BeamSplitterParams::from_reflectance(r1, l1),
                BeamSplitterParams::from_reflectance(r2, l2));
            const auto fit = calibrate(truth);
            worst = std::max({worst, std::abs(std::norm(fit.bs1.r_amp) - r1),
                              std::abs(fit.bs1.loss - l1),
                              std::abs(std::norm(fit.bs2.r_amp) - r2),
                              std::abs(fit.bs2.loss - l2)});
        }
        record("calibrate-roundtrip", worst, 1e-6);
    }
    { // lossless sweeps satisfy R + T = 1
        SweepSpec spec;
        spec.phi2 = 0.8;
        spec.phi1_start = -pi;
        spec.phi1_end = pi;
        spec.points = 2001;
        double worst = 0.0;
        for (const CurveSample& s : sweep(spec).samples)
            worst = std::max(worst, std::abs(s.R + s.T - 1.0));
        record("sweep-energy", worst, 1e-9);
    }
    return out;
}

} // namespace gmi

#endif // GMI_VERIFY_HPP
