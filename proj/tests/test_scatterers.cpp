#include <catch2/catch.hpp>

#include <random>

#include "gmi/scatterers.hpp"

using namespace gmi;

namespace {

double matrix_distance(const ScatteringMatrix& a, const ScatteringMatrix& b) {
    double worst = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j)
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    return worst;
}

std::vector<double> grid_axis(int n) {
    std::vector<double> g;
    for (int k = 0; k < n; ++k) g.push_back(-pi + (k + 0.5) * two_pi / n);
    return g;
}

} // namespace

TEST_CASE("wrap_angle lands in (-pi, pi]") {
    REQUIRE(wrap_angle(0.0) == 0.0);
    REQUIRE(wrap_angle(pi) == Approx(pi));
    REQUIRE(wrap_angle(-pi) == Approx(pi));
    REQUIRE(wrap_angle(3.0 * pi) == Approx(pi));
    REQUIRE(wrap_angle(-0.5) == Approx(-0.5));
    REQUIRE(wrap_angle(two_pi + 0.25) == Approx(0.25));
    REQUIRE_THROWS_AS(wrap_angle(std::numeric_limits<double>::infinity()), invalid_parameter);
}

TEST_CASE("beam_splitter: balanced matrix has the documented sign layout") {
    const auto b = beam_splitter(BeamSplitterParams::ideal());
    const double s = 1.0 / std::numbers::sqrt2;
    const amplitude expect[4][4] = {
        {{0, 0}, {0, 0}, {s, 0}, {s, 0}},
        {{0, 0}, {0, 0}, {s, 0}, {-s, 0}},
        {{s, 0}, {s, 0}, {0, 0}, {0, 0}},
        {{s, 0}, {-s, 0}, {0, 0}, {0, 0}},
    };
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) REQUIRE(std::abs(b(i, j) - expect[i][j]) < 1e-15);
    REQUIRE(is_unitary(b, 1e-12));
}

TEST_CASE("beam_splitter: fully transmissive couples 1<->3 and 2<->4 only") {
    BeamSplitterParams p;
    p.r_amp = amplitude(0.0, 0.0);
    p.t_amp = amplitude(1.0, 0.0);
    const auto b = beam_splitter(p);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const bool coupled = (j == (i + 2) % 4);
            REQUIRE(std::abs(b(i, j)) == Approx(coupled ? 1.0 : 0.0).margin(1e-15));
        }
}

TEST_CASE("beam_splitter: 48/52 imbalance fills the probability slots") {
    const auto b = beam_splitter(BeamSplitterParams::from_reflectance(0.48));
    const auto p = probability_matrix(b);
    // transmission slots carry 0.52, reflection slots 0.48
    REQUIRE(p(0, 2) == Approx(0.52).margin(1e-12));
    REQUIRE(p(1, 3) == Approx(0.52).margin(1e-12));
    REQUIRE(p(0, 3) == Approx(0.48).margin(1e-12));
    REQUIRE(p(1, 2) == Approx(0.48).margin(1e-12));
    for (double s : p.column_sums()) REQUIRE(s == Approx(1.0).margin(1e-12));
}

TEST_CASE("beam_splitter rejects unphysical parameters") {
    BeamSplitterParams p;
    p.r_amp = amplitude(0.8, 0.0);
    p.t_amp = amplitude(0.8, 0.0);
    REQUIRE_THROWS_AS(beam_splitter(p), invalid_parameter);
    REQUIRE_THROWS_AS(BeamSplitterParams::from_reflectance(1.2), invalid_parameter);
    REQUIRE_THROWS_AS(BeamSplitterParams::from_reflectance(0.5, 1.0), invalid_parameter);
    REQUIRE_THROWS_AS(BeamSplitterParams::from_reflectance(0.5, -0.1), invalid_parameter);
}

TEST_CASE("grover_coin: diagonal -1/2, unitary, equals the zero-phase coin") {
    const auto g = grover_coin();
    for (int i = 0; i < 4; ++i) REQUIRE(g(i, i) == amplitude(-0.5, 0.0));
    REQUIRE(is_unitary(g, 1e-12));
    REQUIRE(matrix_distance(g, generalized_coin({0.0, 0.0, 0.0})) == 0.0);
}

TEST_CASE("generalized_coin: (pi, pi, pi) is the negated balanced coin") {
    const auto g = generalized_coin({pi, pi, pi});
    const auto base = grover_coin();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) REQUIRE(std::abs(g(i, j) + base(i, j)) < 1e-15);
}

TEST_CASE("generalized_coin stays unitary for arbitrary phases") {
    const auto s = generalized_coin({0.3, -1.1, 2.0});
    const ScatteringMatrix prod = s.adjoint() * s;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            REQUIRE(std::abs(prod(i, j) - (i == j ? amplitude(1.0, 0.0) : amplitude(0.0, 0.0))) <
                    1e-12);

    for (double a : grid_axis(10))
        for (double b : grid_axis(10))
            for (double c : grid_axis(10))
                REQUIRE(unitarity_defect(generalized_coin({a, b, c})) < 1e-12);
}

TEST_CASE("generalized_coin probabilities are phase-blind quarters") {
    for (double a : grid_axis(6))
        for (double b : grid_axis(6))
            for (double c : grid_axis(6)) {
                const auto p = probability_matrix(generalized_coin({a, b, c}));
                for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < 4; ++j) REQUIRE(std::abs(p(i, j) - 0.25) < 1e-12);
            }
}

TEST_CASE("180-degree rotation symmetry when the arm phases match") {
    const int swap[4] = {2, 3, 0, 1};
    for (double a : grid_axis(8))
        for (double c : grid_axis(8)) {
            const auto g = generalized_coin({a, a, c});
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    REQUIRE(std::abs(g(i, j) - g(swap[i], swap[j])) < 1e-15);
        }
}

TEST_CASE("reduce_phases: no absorption needed at zero arm phases") {
    const auto red = reduce_phases({0.0, 0.0, 0.7});
    REQUIRE(red.theta_eff == Approx(0.7));
    REQUIRE(matrix_distance(red.matrix, bridge_coin(0.7)) == 0.0);
}

TEST_CASE("reduce_phases: quarter-pi triple collapses to the balanced coin") {
    const auto red = reduce_phases({pi / 2, pi / 2, pi / 2});
    REQUIRE(red.theta_eff == Approx(0.0).margin(1e-15));
    REQUIRE(matrix_distance(red.matrix, grover_coin()) < 1e-15);
}

TEST_CASE("reduce_phases: translation arithmetic") {
    const auto red = reduce_phases({0.4, 0.8, 0.0});
    REQUIRE(red.theta_eff == Approx(-0.6).margin(1e-15));
}

TEST_CASE("reduce_phases equals the external-phase conjugation") {
    // oracle: multiply the full coin by diag(e^{-i t1/2}, e^{-i t1/2},
    // e^{-i t2/2}, e^{-i t2/2}) on both sides
    std::mt19937 rng(31u);
    std::uniform_real_distribution<double> angle(-pi, pi);
    for (int k = 0; k < 100; ++k) {
        const CoinPhases ph(angle(rng), angle(rng), angle(rng));
        const auto red = reduce_phases(ph);
        const auto g = generalized_coin(ph);
        const amplitude d1 = std::polar(1.0, -0.5 * ph.theta1);
        const amplitude d2 = std::polar(1.0, -0.5 * ph.theta2);
        ScatteringMatrix dgd(4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                dgd.set(i, j, ((i < 2) ? d1 : d2) * g(i, j) * ((j < 2) ? d1 : d2));
        REQUIRE(matrix_distance(dgd, red.matrix) < 1e-12);
    }
}

TEST_CASE("reduce_phases output keeps the reduced block shape") {
    const auto red = reduce_phases({1.2, -2.4, 0.9});
    const auto& m = red.matrix;
    const amplitude br = 0.5 * std::polar(1.0, red.theta_eff);
    for (int blk = 0; blk < 2; ++blk) {
        const int o = 2 * blk;
        REQUIRE(std::abs(m(o, o) - amplitude(-0.5, 0.0)) < 1e-15);
        REQUIRE(std::abs(m(o + 1, o + 1) - amplitude(-0.5, 0.0)) < 1e-15);
        REQUIRE(std::abs(m(o, o + 1) - amplitude(0.5, 0.0)) < 1e-15);
        REQUIRE(std::abs(m(o + 1, o) - amplitude(0.5, 0.0)) < 1e-15);
    }
    for (int i = 0; i < 2; ++i)
        for (int j = 2; j < 4; ++j) {
            REQUIRE(std::abs(m(i, j) - br) < 1e-15);
            REQUIRE(std::abs(m(j, i) - br) < 1e-15);
        }
}

TEST_CASE("compose_network: balanced splitters reproduce the coin") {
    const auto ideal = BeamSplitterParams::ideal();
    REQUIRE(matrix_distance(compose_network(ideal, ideal, {0.0, 0.0, 0.0}), grover_coin()) <
            1e-12);
    REQUIRE(matrix_distance(compose_network(ideal, ideal, {0.7, -0.2, 1.1}),
                            generalized_coin({0.7, -0.2, 1.1})) < 1e-12);
    for (double a : grid_axis(10))
        for (double b : grid_axis(10))
            for (double c : grid_axis(10))
                REQUIRE(matrix_distance(compose_network(ideal, ideal, {a, b, c}),
                                        generalized_coin({a, b, c})) < 1e-12);
}

TEST_CASE("compose_network: imbalanced lossless trace conserves power") {
    const auto bs = BeamSplitterParams::from_reflectance(0.48);
    const auto p = probability_matrix(compose_network(bs, bs, {0.0, 0.0, 0.0}));
    for (double s : p.column_sums()) REQUIRE(s == Approx(1.0).margin(1e-12));
    // entries are two-encounter path weights, near but not at 1/4
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            lo = std::min(lo, p(i, j));
            hi = std::max(hi, p(i, j));
        }
    REQUIRE(lo == Approx(0.48 * 0.48).margin(1e-12));
    REQUIRE(hi == Approx(0.52 * 0.52).margin(1e-12));
    REQUIRE(hi > 0.25);
    REQUIRE(lo < 0.25);
}

TEST_CASE("compose_network: loss drains the column sums") {
    const auto bs = BeamSplitterParams::from_reflectance(0.5, 0.05);
    const auto p = probability_matrix(compose_network(bs, bs, {0.3, 0.4, 0.5}));
    for (double s : p.column_sums()) REQUIRE(s == Approx(0.95 * 0.95).margin(1e-12));
}
