// Build the coin two ways (ideal matrix vs. physical two-splitter trace with
// the measured 48/52 imbalance) and print the port-to-port probabilities.

#include <cstdio>

#include "gmi/gmi.hpp"

static void print_probabilities(const char* title, const gmi::ProbabilityMatrix& p) {
    std::printf("%s\n", title);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) std::printf("  %.4f", p(i, j));
        std::printf("\n");
    }
    const auto sums = p.column_sums();
    std::printf("  column sums: %.4f %.4f %.4f %.4f\n\n", sums[0], sums[1], sums[2], sums[3]);
}

int main() {
    print_probabilities("ideal coin: every entry 1/4",
                        gmi::probability_matrix(gmi::grover_coin()));

    const auto imbalanced = gmi::predict_probability_matrix(
        gmi::BeamSplitterParams::from_reflectance(0.48, 0.02),
        gmi::BeamSplitterParams::from_reflectance(0.52, 0.02));
    print_probabilities("48/52 splitters with 2% loss per pass", imbalanced);

    print_probabilities("same device, columns renormalized",
                        gmi::renormalize_columns(imbalanced));
    return 0;
}
