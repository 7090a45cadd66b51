#include <catch2/catch.hpp>

#include <random>

#include "gmi/resonator.hpp"

using namespace gmi;

// The explicit round-trip simulation is the independent oracle for every
// closed-form value in this file: its tests come first and the frozen
// expectations below were produced by it.

TEST_CASE("oracle: round trips at (pi/2, pi) settle on R=0.2, T=0.8") {
    const auto rep = iterate_round_trips(GmiConfig(pi / 2, pi), 1, 100000, 1e-10);
    REQUIRE(rep.converged);
    REQUIRE(rep.residual <= 1e-10);
    REQUIRE(rep.iterations < 200); // |B| = sqrt(1/2) contracts fast
    REQUIRE(rep.amplitudes.reflection_probability() == Approx(0.2).margin(1e-9));
    REQUIRE(rep.amplitudes.transmission_probability() == Approx(0.8).margin(1e-9));
}

TEST_CASE("oracle: round trips at (0, pi) give full reflection with r = -1") {
    const auto rep = iterate_round_trips(GmiConfig(0.0, pi), 1);
    REQUIRE(rep.converged);
    REQUIRE(std::abs(rep.amplitudes.r - amplitude(-1.0, 0.0)) < 1e-9);
    REQUIRE(std::abs(rep.amplitudes.t) < 1e-9);
}

TEST_CASE("oracle: lossy resonance absorbs exactly the arm deficit") {
    const GmiConfig cfg(0.0, 0.0, 0.0, bridge_coin(0.0), {0.01, 0.01});
    const auto rep = iterate_round_trips(cfg, 1);
    REQUIRE(rep.converged); // loss makes the round-trip map a contraction
    const double r2 = rep.amplitudes.reflection_probability();
    const double t2 = rep.amplitudes.transmission_probability();
    REQUIRE(r2 < 1.0);
    // half the power enters the arms and loses 1% on the single round trip
    REQUIRE(r2 + t2 == Approx(0.995).margin(1e-12));
}

TEST_CASE("oracle: modulus-one ratio with nonvanishing series never settles") {
    // phases one part in 1e4 apart: |B| is within 1e-9 of 1, far too slow
    const auto rep = iterate_round_trips(GmiConfig(1e-4, 0.0), 1, 100, 1e-10);
    REQUIRE_FALSE(rep.converged);
    REQUIRE(rep.iterations == 100);
    REQUIRE(rep.residual > 1e-10);
}

TEST_CASE("b_c_coefficients: frozen values") {
    {
        const auto [b, c] = b_c_coefficients(0.0, 0.0);
        REQUIRE(b == amplitude(1.0, 0.0));
        REQUIRE(c == amplitude(0.0, 0.0));
    }
    {
        const auto [b, c] = b_c_coefficients(0.0, pi);
        REQUIRE(std::abs(b) < 1e-15);
        REQUIRE(std::abs(c - amplitude(1.0, 0.0)) < 1e-15);
    }
    {
        const auto [b, c] = b_c_coefficients(pi / 2, pi);
        REQUIRE(std::abs(b - amplitude(-0.5, 0.5)) < 1e-15);
        REQUIRE(std::abs(c - amplitude(0.5, 0.5)) < 1e-15);
    }
    std::mt19937 rng(5u);
    std::uniform_real_distribution<double> angle(-pi, pi);
    for (int k = 0; k < 100; ++k) {
        const auto [b, c] = b_c_coefficients(angle(rng), angle(rng));
        REQUIRE(std::norm(b) + std::norm(c) == Approx(1.0).margin(1e-15));
    }
}

TEST_CASE("closed form: spot values checked against the oracle") {
    {
        const auto a = gmi_closed_form(pi, pi);
        REQUIRE(std::abs(a.r) < 1e-15);
        REQUIRE(a.transmission_probability() == Approx(1.0).margin(1e-15));
    }
    {
        const auto a = gmi_closed_form(0.0, pi);
        REQUIRE(std::abs(a.r - amplitude(-1.0, 0.0)) < 1e-15);
        REQUIRE(std::abs(a.t) < 1e-15);
    }
    {
        const auto a = gmi_closed_form(pi / 2, pi);
        REQUIRE(a.reflection_probability() == Approx(0.2).margin(1e-12));
        REQUIRE(a.transmission_probability() == Approx(0.8).margin(1e-12));
        // the quotient term evaluates to (1 - 3i)/20
        const auto [b, c] = b_c_coefficients(pi / 2, pi);
        REQUIRE(std::abs(c * c / (2.0 * b - 2.0) - amplitude(0.05, -0.15)) < 1e-15);
    }
    std::mt19937 rng(13u);
    std::uniform_real_distribution<double> angle(-pi, pi);
    for (int k = 0; k < 50; ++k) {
        const double p1 = angle(rng), p2 = angle(rng);
        const auto [b, c] = b_c_coefficients(p1, p2);
        (void)c;
        if (std::abs(b) > 0.999) continue;
        const auto cf = gmi_closed_form(p1, p2);
        const auto rep = iterate_round_trips(GmiConfig(p1, p2), 1);
        REQUIRE(rep.converged);
        REQUIRE(std::abs(cf.r - rep.amplitudes.r) < 1e-9);
        REQUIRE(std::abs(cf.t - rep.amplitudes.t) < 1e-9);
    }
}

TEST_CASE("closed form conserves energy over random phases") {
    std::mt19937 rng(17u);
    std::uniform_real_distribution<double> angle(-pi, pi);
    for (int k = 0; k < 10000; ++k) {
        const auto a = gmi_closed_form(angle(rng), angle(rng));
        REQUIRE(std::abs(a.reflection_probability() + a.transmission_probability() - 1.0) <
                1e-12);
    }
}

TEST_CASE("closed form is exactly symmetric under arm exchange") {
    std::mt19937 rng(19u);
    std::uniform_real_distribution<double> angle(-pi, pi);
    for (int k = 0; k < 200; ++k) {
        const double p1 = angle(rng), p2 = angle(rng);
        const auto a = gmi_closed_form(p1, p2);
        const auto b = gmi_closed_form(p2, p1);
        REQUIRE(a.r == b.r);
        REQUIRE(a.t == b.t);
    }
}

TEST_CASE("full reflection along phi1 = 0 for every phi2") {
    for (int k = 0; k < 2000; ++k) {
        const double p2 = -pi + (k + 0.5) * two_pi / 2000;
        REQUIRE(gmi_closed_form(0.0, p2).reflection_probability() ==
                Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("steady state: frozen values and the singular point") {
    {
        const auto s = steady_state(GmiConfig(0.0, pi), 1);
        REQUIRE(std::abs(s.r - amplitude(-1.0, 0.0)) < 1e-12);
        REQUIRE(std::abs(s.t) < 1e-12);
    }
    {
        const auto s = steady_state(GmiConfig(pi / 2, pi), 1);
        REQUIRE(s.reflection_probability() == Approx(0.2).margin(1e-12));
        REQUIRE(s.transmission_probability() == Approx(0.8).margin(1e-12));
    }
    REQUIRE_THROWS_AS(steady_state(GmiConfig(0.0, 0.0), 1), resonance_error);
    REQUIRE_THROWS_AS(steady_state(GmiConfig(two_pi, two_pi), 1), resonance_error);
    try {
        steady_state(GmiConfig(0.0, 0.0), 1);
    } catch (const resonance_error& e) {
        REQUIRE(e.phi1() == 0.0);
        REQUIRE(std::string(e.what()).find("phi1") != std::string::npos);
    }
}

TEST_CASE("degenerate point: all three routes behave as documented") {
    const auto cf = gmi_closed_form(0.0, 0.0);
    REQUIRE(cf.r == amplitude(-1.0, 0.0));
    REQUIRE(cf.t == amplitude(0.0, 0.0));

    REQUIRE_THROWS_AS(steady_state(GmiConfig(0.0, 0.0), 1), resonance_error);

    const auto rep = iterate_round_trips(GmiConfig(0.0, 0.0), 1);
    REQUIRE_FALSE(rep.converged); // modulus-one round-trip ratio
    REQUIRE(rep.residual <= 1e-10); // the power drained anyway
    REQUIRE(std::abs(rep.amplitudes.r - amplitude(-1.0, 0.0)) < 1e-12);
}

TEST_CASE("three routes agree on an off-resonance grid") {
    for (int a = 0; a < 20; ++a) {
        for (int b = 0; b < 20; ++b) {
            const double p1 = -pi + (a + 0.25) * two_pi / 20;
            const double p2 = -pi + (b + 0.25) * two_pi / 20;
            const auto [bc, cc] = b_c_coefficients(p1, p2);
            (void)cc;
            if (std::abs(bc) > 0.999) continue;
            const GmiConfig cfg(p1, p2);
            const auto cf = gmi_closed_form(p1, p2);
            const auto ss = steady_state(cfg, 1);
            const auto it = iterate_round_trips(cfg, 1);
            REQUIRE(it.converged);
            REQUIRE(std::abs(cf.r - ss.r) < 1e-12);
            REQUIRE(std::abs(cf.t - ss.t) < 1e-12);
            REQUIRE(std::abs(cf.r - it.amplitudes.r) < 1e-9);
            REQUIRE(std::abs(cf.t - it.amplitudes.t) < 1e-9);
        }
    }
}

TEST_CASE("michelson reference: (r, t) = (B, C)") {
    REQUIRE(michelson_reference(0.0, 0.0).reflection_probability() == Approx(1.0));
    {
        const auto m = michelson_reference(0.0, pi);
        REQUIRE(m.reflection_probability() == Approx(0.0).margin(1e-15));
        REQUIRE(m.transmission_probability() == Approx(1.0).margin(1e-15));
    }
    REQUIRE(michelson_reference(pi / 2, pi).reflection_probability() ==
            Approx(0.5).margin(1e-15));
}

TEST_CASE("input port 2 sees the same moduli as input port 1") {
    std::mt19937 rng(29u);
    std::uniform_real_distribution<double> angle(-pi, pi);
    for (int k = 0; k < 100; ++k) {
        const double p1 = angle(rng), p2 = angle(rng);
        const auto [b, c] = b_c_coefficients(p1, p2);
        (void)c;
        if (std::abs(b) > 0.999) continue;
        const GmiConfig cfg(p1, p2);
        const auto s1 = steady_state(cfg, 1);
        const auto s2 = steady_state(cfg, 2);
        REQUIRE(std::abs(s1.r) == Approx(std::abs(s2.r)).margin(1e-12));
        REQUIRE(std::abs(s1.t) == Approx(std::abs(s2.t)).margin(1e-12));
    }
}

TEST_CASE("arm-difference supermode carries eigenvalue B") {
    std::mt19937 rng(37u);
    std::uniform_real_distribution<double> angle(-pi, pi);
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    for (int k = 0; k < 100; ++k) {
        const double p1 = angle(rng), p2 = angle(rng);
        const auto m = round_trip_matrix(GmiConfig(p1, p2));
        const auto [b, c] = b_c_coefficients(p1, p2);
        (void)c;
        OpticalState v{amplitude(inv_sqrt2, 0.0), amplitude(-inv_sqrt2, 0.0)};
        const auto mv = apply(m, v);
        REQUIRE(std::abs(mv[0] - b * v[0]) < 1e-12);
        REQUIRE(std::abs(mv[1] - b * v[1]) < 1e-12);
    }
}

TEST_CASE("round-trip eigenmodes: structure at zero bridge phase") {
    {
        const auto modes = round_trip_eigenmodes(GmiConfig(0.7, 2.1));
        REQUIRE_FALSE(modes.defective);
        REQUIRE(modes.modes.size() == 2);
        const auto [b, c] = b_c_coefficients(0.7, 2.1);
        (void)c;
        REQUIRE(std::abs(modes.modes[0].value - b) < 1e-12);
        REQUIRE(std::abs(modes.modes[1].value) < 1e-12);
        // leading eigenvector is the arm-difference vector
        const auto& v = modes.modes[0].vector;
        REQUIRE(std::abs(v[0] - amplitude(1.0 / std::numbers::sqrt2, 0.0)) < 1e-12);
        REQUIRE(std::abs(v[1] + amplitude(1.0 / std::numbers::sqrt2, 0.0)) < 1e-12);
    }
    {
        // matched arms: eigenvalue on the unit circle
        const auto modes = round_trip_eigenmodes(GmiConfig(1.3, 1.3));
        REQUIRE(std::abs(std::abs(modes.modes[0].value) - 1.0) < 1e-12);
        REQUIRE(std::abs(modes.modes[0].value - std::polar(1.0, 1.3)) < 1e-12);
    }
    {
        // loss contracts every mode
        const GmiConfig cfg(0.4, 1.9, 0.0, bridge_coin(0.0), {0.1, 0.1});
        for (const auto& mode : round_trip_eigenmodes(cfg).modes)
            REQUIRE(std::abs(mode.value) < 1.0);
    }
    {
        // opposite arms: nilpotent round trip, a genuine Jordan block
        const auto modes = round_trip_eigenmodes(GmiConfig(0.6, 0.6 + pi));
        REQUIRE(modes.defective);
        REQUIRE(modes.modes.size() == 1);
        REQUIRE(std::abs(modes.modes[0].value) < 1e-12);
    }
}

TEST_CASE("nonzero bridge phase: numeric routes agree and conserve energy") {
    std::mt19937 rng(41u);
    std::uniform_real_distribution<double> angle(-pi, pi);
    for (int k = 0; k < 50; ++k) {
        const double p1 = angle(rng), p2 = angle(rng), th = angle(rng);
        const GmiConfig cfg(p1, p2, th);
        GmiAmplitudes ss;
        try {
            ss = steady_state(cfg, 1);
        } catch (const resonance_error&) {
            continue;
        }
        REQUIRE(ss.reflection_probability() + ss.transmission_probability() ==
                Approx(1.0).margin(1e-12));
        const auto rep = iterate_round_trips(cfg, 1);
        if (rep.converged) {
            REQUIRE(std::abs(ss.r - rep.amplitudes.r) < 1e-9);
            REQUIRE(std::abs(ss.t - rep.amplitudes.t) < 1e-9);
        }
    }
}

TEST_CASE("lossy composed coin loses light in the steady state") {
    const auto coin = compose_network(BeamSplitterParams::from_reflectance(0.48, 0.02),
                                      BeamSplitterParams::from_reflectance(0.52, 0.02),
                                      CoinPhases());
    const GmiConfig cfg(0.9, 2.2, 0.0, coin, {0.01, 0.005});
    const auto s = steady_state(cfg, 1);
    const double total = s.reflection_probability() + s.transmission_probability();
    REQUIRE(total < 1.0);
    REQUIRE(total > 0.5);
}

TEST_CASE("config validation") {
    REQUIRE_THROWS_AS(GmiConfig(0.0, 0.0, 0.0, ScatteringMatrix(2)), dimension_error);
    REQUIRE_THROWS_AS(GmiConfig(0.0, 0.0, 0.0, bridge_coin(0.0), {0.5, 1.0}),
                      invalid_parameter);
    REQUIRE_THROWS_AS(iterate_round_trips(GmiConfig(0.1, 0.2), 3), invalid_parameter);
    REQUIRE_THROWS_AS(iterate_round_trips(GmiConfig(0.1, 0.2), 1, 0), invalid_parameter);
    REQUIRE_THROWS_AS(iterate_round_trips(GmiConfig(0.1, 0.2), 1, 10, 0.0), invalid_parameter);
    REQUIRE_THROWS_AS(steady_state(GmiConfig(0.1, 0.2), 0), invalid_parameter);
}
