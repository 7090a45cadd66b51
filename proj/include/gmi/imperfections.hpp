#ifndef GMI_IMPERFECTIONS_HPP
#define GMI_IMPERFECTIONS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "format.hpp"
#include "scatterers.hpp"

namespace gmi {

/// Divide each column by its sum, separating splitting imbalance from loss:
/// output columns sum to one and average 1/4. Uncertainties are scaled by
/// the same per-column factor.
inline ProbabilityMatrix renormalize_columns(const ProbabilityMatrix& p) {
    const auto sums = p.column_sums();
    for (int j = 0; j < 4; ++j)
        if (sums[static_cast<std::size_t>(j)] <= 1e-12)
            throw invalid_data("column " + std::to_string(j + 1) +
                               " has zero sum; cannot renormalize");
    ProbabilityMatrix::Entries e{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            e[static_cast<std::size_t>(i) * 4u + static_cast<std::size_t>(j)] =
                p(i, j) / sums[static_cast<std::size_t>(j)];
    std::optional<ProbabilityMatrix::Entries> u;
    if (p.has_uncertainties()) {
        ProbabilityMatrix::Entries uu{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                uu[static_cast<std::size_t>(i) * 4u + static_cast<std::size_t>(j)] =
                    p.uncertainty(i, j) / sums[static_cast<std::size_t>(j)];
        u = uu;
    }
    return ProbabilityMatrix::from_entries(e, u);
}

/// Probability matrix predicted for a physically composed coin. The phases
/// never move probability: with no internal interference every entry is a
/// pure two-encounter path weight.
inline ProbabilityMatrix predict_probability_matrix(const BeamSplitterParams& bs1,
                                                    const BeamSplitterParams& bs2,
                                                    const CoinPhases& ph = CoinPhases()) {
    return probability_matrix(compose_network(bs1, bs2, ph));
}

struct CalibrationResult {
    BeamSplitterParams bs1;
    BeamSplitterParams bs2;
    double residual = 0.0; // root-mean-square entrywise misfit
    int iterations = 0;    // objective evaluations spent
};

namespace detail {

// Path-weight model evaluated directly from (R1, l1, R2, l2); usable
// slightly outside the physical box while the simplex explores.
inline std::array<double, 16> path_weight_entries(double R1, double l1, double R2, double l2) {
    const double T1 = 1.0 - R1, T2 = 1.0 - R2;
    const double L1 = 1.0 - l1, L2 = 1.0 - l2;
    std::array<double, 16> e{};
    auto at = [&](int i, int j) -> double& {
        return e[static_cast<std::size_t>(i) * 4u + static_cast<std::size_t>(j)];
    };
    at(0, 0) = R1 * R1 * L1 * L1;
    at(1, 0) = R1 * T1 * L1 * L1;
    at(2, 0) = T1 * T2 * L1 * L2;
    at(3, 0) = T1 * R2 * L1 * L2;
    at(0, 1) = T1 * R1 * L1 * L1;
    at(1, 1) = T1 * T1 * L1 * L1;
    at(2, 1) = R1 * T2 * L1 * L2;
    at(3, 1) = R1 * R2 * L1 * L2;
    at(0, 2) = T2 * T1 * L1 * L2;
    at(1, 2) = T2 * R1 * L1 * L2;
    at(2, 2) = R2 * R2 * L2 * L2;
    at(3, 2) = R2 * T2 * L2 * L2;
    at(0, 3) = R2 * T1 * L1 * L2;
    at(1, 3) = R2 * R1 * L1 * L2;
    at(2, 3) = T2 * R2 * L2 * L2;
    at(3, 3) = T2 * T2 * L2 * L2;
    return e;
}

struct SimplexResult {
    std::array<double, 4> x{};
    double f = 0.0;
    int evaluations = 0;
};

// Derivative-free Nelder-Mead on four parameters, deterministic for a fixed
// start. `spread_tol` is the absolute stop threshold on the best/worst
// objective spread.
inline SimplexResult nelder_mead(const std::function<double(const std::array<double, 4>&)>& f,
                                 std::array<double, 4> start,
                                 std::array<double, 4> steps,
                                 double spread_tol, int max_evals) {
    constexpr int n = 4;
    struct Vertex {
        std::array<double, 4> x;
        double f;
    };
    int evals = 0;
    auto eval = [&](const std::array<double, 4>& x) {
        ++evals;
        return f(x);
    };

    std::vector<Vertex> s;
    s.push_back({start, eval(start)});
    for (int i = 0; i < n; ++i) {
        auto x = start;
        x[static_cast<std::size_t>(i)] += steps[static_cast<std::size_t>(i)];
        s.push_back({x, eval(x)});
    }

    auto by_f = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
    std::sort(s.begin(), s.end(), by_f);

    while (evals < max_evals && (s.back().f - s.front().f) > spread_tol) {
        std::array<double, 4> centroid{};
        for (int v = 0; v < n; ++v)
            for (int i = 0; i < n; ++i)
                centroid[static_cast<std::size_t>(i)] +=
                    s[static_cast<std::size_t>(v)].x[static_cast<std::size_t>(i)] / n;

        auto blend = [&](double w) {
            std::array<double, 4> x{};
            for (int i = 0; i < n; ++i)
                x[static_cast<std::size_t>(i)] =
                    centroid[static_cast<std::size_t>(i)] +
                    w * (centroid[static_cast<std::size_t>(i)] -
                         s.back().x[static_cast<std::size_t>(i)]);
            return x;
        };

        const auto xr = blend(1.0);
        const double fr = eval(xr);
        if (fr < s.front().f) {
            const auto xe = blend(2.0);
            const double fe = eval(xe);
            s.back() = (fe < fr) ? Vertex{xe, fe} : Vertex{xr, fr};
        } else if (fr < s[n - 1].f) {
            s.back() = {xr, fr};
        } else {
            const bool outside = fr < s.back().f;
            const auto xc = blend(outside ? 0.5 : -0.5);
            const double fc = eval(xc);
            if (fc < (outside ? fr : s.back().f)) {
                s.back() = {xc, fc};
            } else {
                // shrink toward the best vertex
                for (int v = 1; v <= n; ++v) {
                    auto& vert = s[static_cast<std::size_t>(v)];
                    for (int i = 0; i < n; ++i)
                        vert.x[static_cast<std::size_t>(i)] =
                            s[0].x[static_cast<std::size_t>(i)] +
                            0.5 * (vert.x[static_cast<std::size_t>(i)] -
                                   s[0].x[static_cast<std::size_t>(i)]);
                    vert.f = eval(vert.x);
                }
            }
        }
        std::sort(s.begin(), s.end(), by_f);
    }
    return {s.front().x, s.front().f, evals};
}

} // namespace detail

/// Least-squares fit of (reflectance, loss) for both splitters to a measured
/// probability matrix, starting from the balanced lossless point. The
/// objective is searched with a simplex plus two polish restarts; the run is
/// fully deterministic.
inline CalibrationResult calibrate(const ProbabilityMatrix& measured) {
    const auto sums = measured.column_sums();
    for (int j = 0; j < 4; ++j) {
        const double s = sums[static_cast<std::size_t>(j)];
        if (s <= 1e-12)
            throw invalid_data("column " + std::to_string(j + 1) + " carries no power");
        if (s > 1.05)
            throw invalid_data("column " + std::to_string(j + 1) + " sums to " +
                               format_sci(s) + " > 1.05; data is not input-power normalized");
    }

    auto objective = [&](const std::array<double, 4>& x) {
        const double R1 = x[0], l1 = x[1], R2 = x[2], l2 = x[3];
        if (R1 < 1e-3 || R1 > 1.0 - 1e-3 || R2 < 1e-3 || R2 > 1.0 - 1e-3 ||
            l1 < -0.05 || l1 > 0.95 || l2 < -0.05 || l2 > 0.95) {
            double viol = 0.0;
            viol += std::max(0.0, 1e-3 - R1) + std::max(0.0, R1 - (1.0 - 1e-3));
            viol += std::max(0.0, 1e-3 - R2) + std::max(0.0, R2 - (1.0 - 1e-3));
            viol += std::max(0.0, -0.05 - l1) + std::max(0.0, l1 - 0.95);
            viol += std::max(0.0, -0.05 - l2) + std::max(0.0, l2 - 0.95);
            return 1e3 * (1.0 + viol * viol);
        }
        const auto model = detail::path_weight_entries(R1, l1, R2, l2);
        double sum = 0.0;
        for (int k = 0; k < 16; ++k) {
            const double d = model[static_cast<std::size_t>(k)] -
                             measured.entries()[static_cast<std::size_t>(k)];
            sum += d * d;
        }
        return sum;
    };

    // stop once the simplex objective spread is below (rms tolerance)^2 * 16
    constexpr double rms_tol = 1e-10;
    constexpr double spread_tol = rms_tol * rms_tol * 16.0;
    constexpr int budget = 10000;

    std::array<double, 4> best{0.5, 0.0, 0.5, 0.0};
    double best_f = objective(best);
    int evals = 1;
    std::array<double, 4> steps{0.05, 0.02, 0.05, 0.02};
    for (int round = 0; round < 3 && evals < budget; ++round) {
        auto r = detail::nelder_mead(objective, best, steps, spread_tol, budget - evals);
        evals += r.evaluations;
        if (r.f < best_f) {
            best = r.x;
            best_f = r.f;
        }
        for (double& st : steps) st /= 20.0;
    }

    auto snap_loss = [](double l) { return (l < 0.0 && l > -1e-7) ? 0.0 : std::max(0.0, l); };
    CalibrationResult out;
    out.bs1 = BeamSplitterParams::from_reflectance(std::clamp(best[0], 0.0, 1.0), snap_loss(best[1]));
    out.bs2 = BeamSplitterParams::from_reflectance(std::clamp(best[2], 0.0, 1.0), snap_loss(best[3]));
    out.iterations = evals;

    const ProbabilityMatrix fitted = predict_probability_matrix(out.bs1, out.bs2);
    double sum = 0.0;
    for (int k = 0; k < 16; ++k) {
        const double d = fitted.entries()[static_cast<std::size_t>(k)] -
                         measured.entries()[static_cast<std::size_t>(k)];
        sum += d * d;
    }
    out.residual = std::sqrt(sum / 16.0);
    return out;
}

// --- plain-text formats ----------------------------------------------------

/// 4x4 CSV block of probabilities; an optional second 4x4 block after a
/// blank line carries the per-entry uncertainties.
inline void write_probability_csv(std::ostream& os, const ProbabilityMatrix& p) {
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j)
            os << (j ? "," : "") << format_sci(p(i, j));
        os << "\n";
    }
    if (p.has_uncertainties()) {
        os << "\n";
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j)
                os << (j ? "," : "") << format_sci(p.uncertainty(i, j));
            os << "\n";
        }
    }
}

namespace detail {

inline std::vector<double> parse_csv_row(const std::string& line, int line_no) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(cell, &pos);
        } catch (const std::exception&) {
            throw invalid_data("line " + std::to_string(line_no) + ": cannot parse '" +
                               cell + "' as a number");
        }
        while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
        if (pos != cell.size())
            throw invalid_data("line " + std::to_string(line_no) + ": trailing junk in '" +
                               cell + "'");
        out.push_back(v);
    }
    return out;
}

inline bool blank_line(const std::string& line) {
    for (char ch : line)
        if (!std::isspace(static_cast<unsigned char>(ch))) return false;
    return true;
}

} // namespace detail

inline ProbabilityMatrix read_probability_csv(std::istream& is) {
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (detail::blank_line(line)) continue;
        auto vals = detail::parse_csv_row(line, line_no);
        if (vals.size() != 4)
            throw invalid_data("line " + std::to_string(line_no) + ": expected 4 values, got " +
                               std::to_string(vals.size()));
        rows.push_back(std::move(vals));
    }
    if (rows.size() != 4 && rows.size() != 8)
        throw invalid_data("probability CSV needs 4 rows (plus an optional 4-row "
                           "uncertainty block); found " + std::to_string(rows.size()));

    ProbabilityMatrix::Entries e{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            e[static_cast<std::size_t>(i) * 4u + static_cast<std::size_t>(j)] =
                rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    std::optional<ProbabilityMatrix::Entries> u;
    if (rows.size() == 8) {
        ProbabilityMatrix::Entries uu{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                uu[static_cast<std::size_t>(i) * 4u + static_cast<std::size_t>(j)] =
                    rows[static_cast<std::size_t>(i) + 4u][static_cast<std::size_t>(j)];
        u = uu;
    }
    return ProbabilityMatrix::from_entries(e, u);
}

/// Flat key-value record of a calibration fit.
inline void write_calibration_record(std::ostream& os, const CalibrationResult& r) {
    os << "bs1_reflectance=" << format_sci(std::norm(r.bs1.r_amp)) << "\n"
       << "bs1_loss=" << format_sci(r.bs1.loss) << "\n"
       << "bs2_reflectance=" << format_sci(std::norm(r.bs2.r_amp)) << "\n"
       << "bs2_loss=" << format_sci(r.bs2.loss) << "\n"
       << "residual_rms=" << format_sci(r.residual) << "\n"
       << "evaluations=" << r.iterations << "\n";
}

} // namespace gmi

#endif // GMI_IMPERFECTIONS_HPP
