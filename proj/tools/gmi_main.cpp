// Command-line front end: device construction, interferogram sweeps, metric
// extraction, baseline comparison, calibration fits and the invariant suite.
// Data goes to stdout (or --output), diagnostics to stderr. Exit codes:
// 0 success, 1 validation error, 2 numeric failure.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gmi/gmi.hpp"

namespace {

struct OutputTarget {
    std::string path;

    // Returns the stream to write data to; file targets are created lazily.
    std::ostream& stream() {
        if (path.empty()) return std::cout;
        if (!file) {
            file = std::make_unique<std::ofstream>(path);
            if (!*file)
                throw gmi::invalid_parameter("cannot open output file '" + path + "'");
        }
        return *file;
    }

    std::unique_ptr<std::ofstream> file;
};

void write_complex_csv(std::ostream& os, const gmi::ScatteringMatrix& s) {
    for (int i = 0; i < s.dim(); ++i) {
        for (int j = 0; j < s.dim(); ++j)
            os << (j ? "," : "") << gmi::format_amplitude(s(i, j));
        os << "\n";
    }
}

int run_coin(double theta1, double theta2, double theta, bool compose,
             double bs1_r, double bs2_r, double loss1, double loss2, OutputTarget& out) {
    const gmi::CoinPhases ph(theta1, theta2, theta);
    gmi::ScatteringMatrix s = compose
        ? gmi::compose_network(gmi::BeamSplitterParams::from_reflectance(bs1_r, loss1),
                               gmi::BeamSplitterParams::from_reflectance(bs2_r, loss2), ph)
        : gmi::generalized_coin(ph);
    write_complex_csv(out.stream(), s);
    return 0;
}

int run_sweep(const gmi::SweepSpec& spec, OutputTarget& out) {
    const gmi::InterferogramCurve curve = gmi::sweep(spec);
    for (double g : curve.gaps)
        std::cerr << "note: skipped resonant sample at phi1=" << gmi::format_sci(g) << "\n";
    gmi::write_curve_csv(out.stream(), curve);
    return 0;
}

int run_metrics(const std::string& input, OutputTarget& out) {
    std::ifstream is(input);
    if (!is)
        throw gmi::invalid_parameter("cannot open curve file '" + input + "'");
    const gmi::InterferogramCurve curve = gmi::read_curve_csv(is);
    const double vis = gmi::visibility(curve);
    const gmi::SlopeEstimate slope = gmi::max_slope(curve);
    std::ostream& os = out.stream();
    os << "samples=" << curve.samples.size() << "\n"
       << "visibility=" << gmi::format_sci(vis) << "\n"
       << "max_slope=" << gmi::format_sci(slope.slope) << "\n"
       << "max_slope_phi1=" << gmi::format_sci(slope.at_phi1) << "\n";
    return 0;
}

int run_compare(double phi2, double theta, double delta_phi, int points, OutputTarget& out) {
    const gmi::EnhancementReport rep = gmi::enhancement_report(phi2, theta, delta_phi, points);
    gmi::write_enhancement_record(out.stream(), rep);
    return 0;
}

int run_calibrate(const std::string& measured, OutputTarget& out) {
    std::ifstream is(measured);
    if (!is)
        throw gmi::invalid_parameter("cannot open measured-data file '" + measured + "'");
    const gmi::ProbabilityMatrix p = gmi::read_probability_csv(is);
    const gmi::CalibrationResult fit = gmi::calibrate(p);
    gmi::write_calibration_record(out.stream(), fit);
    return 0;
}

int run_verify(int grid, OutputTarget& out) {
    const auto results = gmi::run_property_suite(grid);
    std::ostream& os = out.stream();
    bool all = true;
    for (const gmi::PropertyResult& r : results) {
        os << (r.pass ? "[ ok ] " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
        all = all && r.pass;
    }
    os << (all ? "all properties hold" : "property violations found") << "\n";
    return all ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator for directionally-unbiased four-port scatterers and the "
                 "interferometer built from them. Angles are radians; arm phases are "
                 "per round trip."};
    app.require_subcommand(1);
    OutputTarget out;

    // coin
    auto* coin = app.add_subcommand("coin", "Emit a coin matrix as 4x4 complex CSV");
    double theta1 = 0.0, theta2 = 0.0, theta = 0.0;
    bool compose = false;
    double bs1_r = 0.5, bs2_r = 0.5, loss1 = 0.0, loss2 = 0.0;
    coin->add_option("--theta1", theta1, "mirror-arm 1 round-trip phase");
    coin->add_option("--theta2", theta2, "mirror-arm 2 round-trip phase");
    coin->add_option("--theta", theta, "bridge phase");
    coin->add_flag("--compose", compose, "trace the two-splitter network instead of the ideal coin");
    coin->add_option("--bs1-r", bs1_r, "power reflectance of splitter 1 (with --compose)");
    coin->add_option("--bs2-r", bs2_r, "power reflectance of splitter 2 (with --compose)");
    coin->add_option("--loss1", loss1, "per-pass power loss of splitter 1");
    coin->add_option("--loss2", loss2, "per-pass power loss of splitter 2");
    coin->add_option("--output", out.path, "write to file instead of stdout");

    // sweep
    auto* sw = app.add_subcommand("sweep", "Sample an interferogram R,T over phi1");
    gmi::SweepSpec spec;
    std::string model = "auto";
    sw->add_option("--phi2", spec.phi2, "fixed arm-2 round-trip phase")->required();
    sw->add_option("--theta", spec.theta, "bridge phase");
    sw->add_option("--from", spec.phi1_start, "phi1 range start (default 0)");
    sw->add_option("--to", spec.phi1_end, "phi1 range end (default 2*pi)");
    sw->add_option("--points", spec.points, "sample count (default 2001)");
    sw->add_option("--model", model, "ideal|steady_state|iterative|michelson (default: auto)");
    sw->add_option("--arm-loss1", spec.device.arm_loss1, "arm 1 round-trip power loss");
    sw->add_option("--arm-loss2", spec.device.arm_loss2, "arm 2 round-trip power loss");
    sw->add_option("--output", out.path, "write to file instead of stdout");

    // metrics
    auto* me = app.add_subcommand("metrics", "Visibility and max slope of a curve CSV");
    std::string input;
    me->add_option("--input", input, "curve CSV produced by `sweep`")->required();
    me->add_option("--output", out.path, "write to file instead of stdout");

    // compare
    auto* cmp = app.add_subcommand("compare", "Enhancement report against the Michelson baseline");
    double c_phi2 = 0.0, c_theta = 0.0, c_delta = 1e-3;
    int c_points = 2001;
    cmp->add_option("--phi2", c_phi2, "arm-2 phase of the tuned curve")->required();
    cmp->add_option("--theta", c_theta, "bridge phase");
    cmp->add_option("--delta-phi", c_delta, "phase step applied at both operating points");
    cmp->add_option("--points", c_points, "coarse grid points");
    cmp->add_option("--output", out.path, "write to file instead of stdout");

    // calibrate
    auto* cal = app.add_subcommand("calibrate", "Fit splitter parameters to a measured 4x4 CSV");
    std::string measured;
    cal->add_option("--measured", measured, "probability matrix CSV")->required();
    cal->add_option("--output", out.path, "write to file instead of stdout");

    // verify
    auto* ver = app.add_subcommand("verify", "Run the invariant suite");
    int grid = 10;
    ver->add_option("--grid", grid, "phase-grid density per axis (default 10)");
    ver->add_option("--output", out.path, "write to file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (app.got_subcommand(coin))
            return run_coin(theta1, theta2, theta, compose, bs1_r, bs2_r, loss1, loss2, out);
        if (app.got_subcommand(sw)) {
            if (model == "auto")
                spec.model = (spec.theta == 0.0 && spec.device.arm_loss1 == 0.0 &&
                              spec.device.arm_loss2 == 0.0)
                                 ? gmi::SweepModel::ideal_closed_form
                                 : gmi::SweepModel::steady_state;
            else
                spec.model = gmi::sweep_model_from_string(model);
            return run_sweep(spec, out);
        }
        if (app.got_subcommand(me)) return run_metrics(input, out);
        if (app.got_subcommand(cmp)) return run_compare(c_phi2, c_theta, c_delta, c_points, out);
        if (app.got_subcommand(cal)) return run_calibrate(measured, out);
        if (app.got_subcommand(ver)) return run_verify(grid, out);
        std::cerr << "error: no command selected\n";
        return 1;
    } catch (const gmi::invalid_parameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const gmi::invalid_data& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const gmi::dimension_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const gmi::resonance_error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    } catch (const gmi::error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    }
}
