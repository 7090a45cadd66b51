#ifndef GMI_METRICS_HPP
#define GMI_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "imperfections.hpp"
#include "resonator.hpp"

namespace gmi {

enum class SweepModel {
    ideal_closed_form, // lossless, zero bridge phase, analytic
    steady_state,      // exact series sum; any coin, lossy arms
    iterative,         // explicit round trips
    michelson          // plain-Michelson baseline on the same arms
};

inline std::string to_string(SweepModel m) {
    switch (m) {
        case SweepModel::ideal_closed_form: return "ideal";
        case SweepModel::steady_state: return "steady_state";
        case SweepModel::iterative: return "iterative";
        case SweepModel::michelson: return "michelson";
    }
    return "?";
}

inline SweepModel sweep_model_from_string(const std::string& s) {
    if (s == "ideal" || s == "ideal_closed_form" || s == "closed_form")
        return SweepModel::ideal_closed_form;
    if (s == "steady_state" || s == "steady") return SweepModel::steady_state;
    if (s == "iterative") return SweepModel::iterative;
    if (s == "michelson") return SweepModel::michelson;
    throw invalid_parameter("unknown sweep model '" + s + "'");
}

/// Device bundle for the lossy/custom models: an optional substitute coin
/// and per-arm round-trip losses.
struct ComponentParams {
    std::optional<ScatteringMatrix> coin;
    double arm_loss1 = 0.0;
    double arm_loss2 = 0.0;
};

struct SweepSpec {
    double phi2 = 0.0;
    double theta = 0.0;
    double phi1_start = 0.0;
    double phi1_end = two_pi;
    int points = 2001;
    SweepModel model = SweepModel::ideal_closed_form;
    ComponentParams device{};

    void validate() const {
        if (!std::isfinite(phi2) || !std::isfinite(theta) ||
            !std::isfinite(phi1_start) || !std::isfinite(phi1_end))
            throw invalid_parameter("sweep phases must be finite");
        if (!(phi1_end > phi1_start))
            throw invalid_parameter("sweep needs phi1_end > phi1_start");
        if (points < 3)
            throw invalid_parameter("sweep needs at least 3 points");
    }
};

struct CurveSample {
    double phi1;
    double R;
    double T;
};

/// Sampled interferogram. `gaps` lists the phi1 values of samples that were
/// skipped because a resonant point could not be evaluated (or the iterative
/// model ran out of trips); gap records live in memory only, the CSV format
/// carries the evaluated samples.
struct InterferogramCurve {
    std::vector<CurveSample> samples;
    std::vector<double> gaps;
    std::optional<SweepSpec> spec;
};

namespace detail {

inline GmiConfig config_for(const SweepSpec& spec, double phi1) {
    if (spec.device.coin)
        return GmiConfig(phi1, spec.phi2, spec.theta, *spec.device.coin,
                         {spec.device.arm_loss1, spec.device.arm_loss2});
    return GmiConfig(phi1, spec.phi2, spec.theta, bridge_coin(spec.theta),
                     {spec.device.arm_loss1, spec.device.arm_loss2});
}

// Single-point model evaluation; throws resonance_error at a steady-state
// singularity and convergence_error when the iterative model stalls.
inline std::pair<double, double> evaluate_model(const SweepSpec& spec, double phi1) {
    switch (spec.model) {
        case SweepModel::ideal_closed_form: {
            if (spec.theta != 0.0)
                throw invalid_parameter("the closed form needs zero bridge phase; "
                                        "use the steady_state model");
            if (spec.device.coin || spec.device.arm_loss1 != 0.0 || spec.device.arm_loss2 != 0.0)
                throw invalid_parameter("the closed form is lossless and balanced; "
                                        "use steady_state/iterative for device params");
            const GmiAmplitudes a = gmi_closed_form(phi1, spec.phi2);
            return {a.reflection_probability(), a.transmission_probability()};
        }
        case SweepModel::steady_state: {
            const GmiAmplitudes a = steady_state(config_for(spec, phi1), 1);
            return {a.reflection_probability(), a.transmission_probability()};
        }
        case SweepModel::iterative: {
            const RoundTripReport rep = iterate_round_trips(config_for(spec, phi1), 1);
            if (rep.residual > 1e-10)
                throw convergence_error("round trips did not settle at phi1=" +
                                        format_sci(phi1));
            return {rep.amplitudes.reflection_probability(),
                    rep.amplitudes.transmission_probability()};
        }
        case SweepModel::michelson: {
            const GmiAmplitudes a = michelson_reference(phi1, spec.phi2);
            return {a.reflection_probability(), a.transmission_probability()};
        }
    }
    throw invalid_parameter("unknown sweep model");
}

inline double clamp_probability(double v, const char* what) {
    if (!std::isfinite(v) || v < -1e-9 || v > 1.0 + 1e-9)
        throw error(std::string(what) + " left [0, 1]: " + format_sci(v));
    return std::min(1.0, std::max(0.0, v));
}

} // namespace detail

/// Evaluate R, T at `points` equally spaced phi1 values with the selected
/// model. Resonant or non-settling samples are recorded as gaps, not
/// errors; a sweep in which nothing could be evaluated throws.
inline InterferogramCurve sweep(const SweepSpec& spec) {
    spec.validate();
    InterferogramCurve curve;
    curve.spec = spec;
    curve.samples.reserve(static_cast<std::size_t>(spec.points));
    const double h = (spec.phi1_end - spec.phi1_start) / (spec.points - 1);
    for (int i = 0; i < spec.points; ++i) {
        const double phi1 = spec.phi1_start + i * h;
        try {
            const auto [r, t] = detail::evaluate_model(spec, phi1);
            curve.samples.push_back({phi1,
                                     detail::clamp_probability(r, "reflection"),
                                     detail::clamp_probability(t, "transmission")});
        } catch (const resonance_error&) {
            curve.gaps.push_back(phi1);
        } catch (const convergence_error&) {
            curve.gaps.push_back(phi1);
        }
    }
    if (curve.samples.empty())
        throw convergence_error("sweep produced no samples: every point was resonant "
                                "or failed to settle");
    return curve;
}

/// Fringe visibility (R_max - R_min)/(R_max + R_min) over the sampled
/// reflection curve; an all-zero curve has visibility 0.
inline double visibility(const InterferogramCurve& curve) {
    if (curve.samples.size() < 3)
        throw invalid_parameter("visibility needs at least 3 samples");
    double lo = curve.samples.front().R, hi = lo;
    for (const CurveSample& s : curve.samples) {
        lo = std::min(lo, s.R);
        hi = std::max(hi, s.R);
    }
    const double denom = hi + lo;
    if (denom <= 0.0) return 0.0;
    return (hi - lo) / denom;
}

struct SlopeEstimate {
    double slope = 0.0;   // max |dR/dphi1|
    double at_phi1 = 0.0; // where it occurs
};

/// Max |dR/dphi1| by central differences (one-sided at the endpoints).
/// Requires uniform phi1 spacing; curves with gaps must be resampled first.
inline SlopeEstimate max_slope(const InterferogramCurve& curve) {
    const auto& s = curve.samples;
    const std::size_t n = s.size();
    if (n < 3)
        throw invalid_parameter("slope estimation needs at least 3 samples");
    const double h = s[1].phi1 - s[0].phi1;
    if (!(h > 0.0))
        throw invalid_data("phi1 must be strictly increasing");
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double dx = s[i + 1].phi1 - s[i].phi1;
        if (std::abs(dx - h) > 1e-6 * std::max(std::abs(h), 1e-12))
            throw invalid_data("non-uniform phi1 spacing; resample before slope estimation");
    }
    SlopeEstimate best;
    auto consider = [&](double slope, double at) {
        if (slope > best.slope) best = {slope, at};
    };
    consider(std::abs(s[1].R - s[0].R) / h, s[0].phi1);
    consider(std::abs(s[n - 1].R - s[n - 2].R) / h, s[n - 1].phi1);
    for (std::size_t i = 1; i + 1 < n; ++i)
        consider(std::abs(s[i + 1].R - s[i - 1].R) / (2.0 * h), s[i].phi1);
    return best;
}

/// Slope estimate with local refinement: a coarse pass over the window, then
/// `levels` re-sweeps of a narrowing window around the running argmax (each
/// level shrinks the spacing fifty-fold).
inline SlopeEstimate refined_max_slope(const SweepSpec& coarse, int levels = 3) {
    coarse.validate();
    SlopeEstimate best = max_slope(sweep(coarse));
    double h = (coarse.phi1_end - coarse.phi1_start) / (coarse.points - 1);
    for (int level = 0; level < levels; ++level) {
        SweepSpec fine = coarse;
        fine.phi1_start = best.at_phi1 - h;
        fine.phi1_end = best.at_phi1 + h;
        fine.points = 101;
        const SlopeEstimate cand = max_slope(sweep(fine));
        if (cand.slope > best.slope) best = cand;
        h = 2.0 * h / 100.0;
    }
    return best;
}

struct SlopeScanResult {
    double phi2 = 0.0;
    SlopeEstimate slope{};
    bool achieved = false;
};

/// Walk phi2 downward from pi (halving each step) until the refined maximum
/// slope of the lossless curve reaches `target`. The slope grows without
/// bound as phi2 approaches zero, so any finite target is eventually met.
inline SlopeScanResult slope_scan(double target, double theta = 0.0,
                                  int coarse_points = 2001, double phi2_floor = 1e-3) {
    if (!(target > 0.0))
        throw invalid_parameter("slope target must be positive");
    SlopeScanResult best;
    for (double phi2 = pi; phi2 >= phi2_floor; phi2 *= 0.5) {
        SweepSpec spec;
        spec.phi2 = phi2;
        spec.theta = theta;
        spec.phi1_start = -pi;
        spec.phi1_end = pi;
        spec.points = coarse_points;
        spec.model = (theta == 0.0) ? SweepModel::ideal_closed_form
                                    : SweepModel::steady_state;
        const SlopeEstimate est = refined_max_slope(spec);
        if (est.slope > best.slope.slope) best = {phi2, est, false};
        if (est.slope >= target) {
            best = {phi2, est, true};
            break;
        }
    }
    return best;
}

struct EnhancementReport {
    double gmi_max_slope = 0.0;
    double michelson_max_slope = 0.0;
    double slope_ratio = 0.0;
    double gmi_visibility = 0.0;
    double delta_phi = 0.0;
    double gmi_delta_I = 0.0;
    double michelson_delta_I = 0.0;
    double intensity_ratio = 0.0;
};

namespace detail {

inline double intensity_ratio_of(double gmi_dI, double mich_dI) {
    if (mich_dI <= 0.0)
        return gmi_dI <= 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    return gmi_dI / mich_dI;
}

} // namespace detail

/// Compare the tuned interferometer against the plain-Michelson baseline:
/// find each curve's maximum-slope operating point, apply the same phase
/// step delta_phi around it, and report the intensity responses. The
/// baseline slope tops out at 1/2 under the single-pass phase convention.
inline EnhancementReport enhancement_report(double phi2, double theta, double delta_phi,
                                            int grid_points = 2001) {
    if (!(delta_phi > 0.0))
        throw invalid_parameter("delta_phi must be positive");
    SweepSpec gspec;
    gspec.phi2 = phi2;
    gspec.theta = theta;
    gspec.phi1_start = -pi;
    gspec.phi1_end = pi;
    gspec.points = grid_points;
    gspec.model = (theta == 0.0) ? SweepModel::ideal_closed_form : SweepModel::steady_state;
    SweepSpec mspec = gspec;
    mspec.model = SweepModel::michelson;

    const InterferogramCurve gcurve = sweep(gspec);
    const SlopeEstimate gslope = refined_max_slope(gspec);
    const SlopeEstimate mslope = refined_max_slope(mspec);

    auto reflection_at = [](const SweepSpec& spec, double phi1) {
        return detail::evaluate_model(spec, phi1).first;
    };
    const double g_dI = std::abs(reflection_at(gspec, gslope.at_phi1 + 0.5 * delta_phi) -
                                 reflection_at(gspec, gslope.at_phi1 - 0.5 * delta_phi));
    const double m_dI = std::abs(reflection_at(mspec, mslope.at_phi1 + 0.5 * delta_phi) -
                                 reflection_at(mspec, mslope.at_phi1 - 0.5 * delta_phi));

    EnhancementReport rep;
    rep.gmi_max_slope = gslope.slope;
    rep.michelson_max_slope = mslope.slope;
    rep.slope_ratio = mslope.slope > 0.0 ? gslope.slope / mslope.slope : 0.0;
    rep.gmi_visibility = visibility(gcurve);
    rep.delta_phi = delta_phi;
    rep.gmi_delta_I = g_dI;
    rep.michelson_delta_I = m_dI;
    rep.intensity_ratio = detail::intensity_ratio_of(g_dI, m_dI);
    return rep;
}

/// Same report computed from two already-sampled curves (reflection values
/// are linearly interpolated at the probe points). Useful when the two
/// curves come from files or from the same model family.
inline EnhancementReport report_from_curves(const InterferogramCurve& gmi_curve,
                                            const InterferogramCurve& michelson_curve,
                                            double delta_phi) {
    if (!(delta_phi > 0.0))
        throw invalid_parameter("delta_phi must be positive");
    auto interp = [](const InterferogramCurve& c, double x) {
        const auto& s = c.samples;
        if (x <= s.front().phi1) return s.front().R;
        if (x >= s.back().phi1) return s.back().R;
        std::size_t lo = 0, hi = s.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (s[mid].phi1 <= x ? lo : hi) = mid;
        }
        const double w = (x - s[lo].phi1) / (s[hi].phi1 - s[lo].phi1);
        return (1.0 - w) * s[lo].R + w * s[hi].R;
    };

    const SlopeEstimate gs = max_slope(gmi_curve);
    const SlopeEstimate ms = max_slope(michelson_curve);
    const double g_dI = std::abs(interp(gmi_curve, gs.at_phi1 + 0.5 * delta_phi) -
                                 interp(gmi_curve, gs.at_phi1 - 0.5 * delta_phi));
    const double m_dI = std::abs(interp(michelson_curve, ms.at_phi1 + 0.5 * delta_phi) -
                                 interp(michelson_curve, ms.at_phi1 - 0.5 * delta_phi));

    EnhancementReport rep;
    rep.gmi_max_slope = gs.slope;
    rep.michelson_max_slope = ms.slope;
    rep.slope_ratio = ms.slope > 0.0 ? gs.slope / ms.slope : 0.0;
    rep.gmi_visibility = visibility(gmi_curve);
    rep.delta_phi = delta_phi;
    rep.gmi_delta_I = g_dI;
    rep.michelson_delta_I = m_dI;
    rep.intensity_ratio = detail::intensity_ratio_of(g_dI, m_dI);
    return rep;
}

// --- plain-text formats ----------------------------------------------------

inline void write_curve_csv(std::ostream& os, const InterferogramCurve& curve) {
    os << "phi1,R,T\n";
    for (const CurveSample& s : curve.samples)
        os << format_sci(s.phi1) << "," << format_sci(s.R) << "," << format_sci(s.T) << "\n";
}

inline InterferogramCurve read_curve_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line))
        throw invalid_data("empty curve file");
    if (line != "phi1,R,T" && line != "phi1,R,T\r")
        throw invalid_data("curve CSV must start with the header 'phi1,R,T'");
    InterferogramCurve curve;
    int line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (detail::blank_line(line)) continue;
        const auto vals = detail::parse_csv_row(line, line_no);
        if (vals.size() != 3)
            throw invalid_data("line " + std::to_string(line_no) +
                               ": expected phi1,R,T");
        if (!curve.samples.empty() && !(vals[0] > curve.samples.back().phi1))
            throw invalid_data("line " + std::to_string(line_no) +
                               ": phi1 must be strictly increasing");
        curve.samples.push_back({vals[0],
                                 detail::clamp_probability(vals[1], "reflection"),
                                 detail::clamp_probability(vals[2], "transmission")});
    }
    if (curve.samples.empty())
        throw invalid_data("curve file holds no samples");
    return curve;
}

inline void write_enhancement_record(std::ostream& os, const EnhancementReport& r) {
    os << "gmi_max_slope=" << format_sci(r.gmi_max_slope) << "\n"
       << "michelson_max_slope=" << format_sci(r.michelson_max_slope) << "\n"
       << "slope_ratio=" << format_sci(r.slope_ratio) << "\n"
       << "gmi_visibility=" << format_sci(r.gmi_visibility) << "\n"
       << "delta_phi=" << format_sci(r.delta_phi) << "\n"
       << "gmi_delta_I=" << format_sci(r.gmi_delta_I) << "\n"
       << "michelson_delta_I=" << format_sci(r.michelson_delta_I) << "\n"
       << "intensity_ratio=" << format_sci(r.intensity_ratio) << "\n";
}

} // namespace gmi

#endif // GMI_METRICS_HPP
