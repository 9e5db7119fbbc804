// bellsim: dual-rail flying-qubit Bell-test workbench.
//
// Subcommands: chsh, sweep, violation, calibrate, compile, sample.
// Numeric angle arguments accept pi literals ("pi", "pi/2", "3pi/4").

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bellsim/bell.hpp"
#include "bellsim/device.hpp"
#include "bellsim/device_config.hpp"
#include "bellsim/sampler.hpp"
#include "bellsim/textutil.hpp"

namespace {

using bellsim::bell::AngleSettings;
using bellsim::bell::CouplerPhase;
using json = nlohmann::json;

struct SeedOption {
    std::uint64_t value = 0;
    CLI::Option* option = nullptr;

    void attach(CLI::App* app) {
        option = app->add_option("--seed", value, "RNG seed (default: BELLSIM_SEED or 0)");
    }

    // --seed wins over the BELLSIM_SEED environment default.
    std::uint64_t resolve() const {
        if (option != nullptr && option->count() > 0) return value;
        if (const char* env = std::getenv("BELLSIM_SEED"); env != nullptr && *env != '\0') {
            return std::strtoull(env, nullptr, 10);
        }
        return 0;
    }
};

void emit_record(const json& record, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << record.dump() << "\n";
        return;
    }
    std::ofstream out(output_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file: " + output_path);
    out << record.dump(2) << "\n";
}

AngleSettings parse_settings_list(const std::string& list) {
    std::vector<double> angles;
    std::stringstream stream(list);
    std::string token;
    while (std::getline(stream, token, ',')) angles.push_back(bellsim::text::parse_angle(token));
    if (angles.size() != 4) {
        throw std::invalid_argument("--angles needs four comma-separated values (a,b,a',b')");
    }
    return {angles[0], angles[1], angles[2], angles[3]};
}

json settings_to_json(const AngleSettings& settings) {
    return json{{"theta_a", settings.theta_a},
                {"theta_b", settings.theta_b},
                {"theta_a2", settings.theta_a2},
                {"theta_b2", settings.theta_b2}};
}

int run_chsh(const std::string& alpha_text, const std::string& angles_text, bool optimize,
             std::uint64_t shots, const SeedOption& seed, const std::string& output_path) {
    const CouplerPhase alpha(bellsim::text::parse_angle(alpha_text));

    bellsim::bell::ChshResult result;
    if (optimize) {
        result = bellsim::bell::chsh_max(alpha);
    } else {
        result = bellsim::bell::chsh_value(alpha, parse_settings_list(angles_text));
    }

    std::cout << "alpha = " << bellsim::text::format_number(alpha.value()) << " rad\n";
    std::cout << "CHSH |S| = " << std::setprecision(10) << result.abs_value()
              << " (signed " << result.chsh_value << ")\n";
    std::cout << "violated: " << (result.violated ? "yes" : "no") << "\n";

    json record{{"command", "chsh"},
                {"alpha", alpha.value()},
                {"optimized", optimize},
                {"settings", settings_to_json(result.settings)},
                {"correlations", result.correlations},
                {"chsh", result.chsh_value},
                {"chsh_abs", result.abs_value()},
                {"violated", result.violated}};

    if (shots > 0) {
        const auto estimate = bellsim::sampler::estimate_chsh(
            alpha, result.settings, {shots, seed.resolve(), false});
        std::cout << "sampled S = " << estimate.mean << " +/- " << estimate.std_error << " ("
                  << estimate.shots << " shots)\n";
        record["estimate"] = json{{"mean", estimate.mean},
                                  {"std_error", estimate.std_error},
                                  {"shots", estimate.shots},
                                  {"seed", seed.resolve()}};
    }
    emit_record(record, output_path);
    return 0;
}

int run_sweep(const std::string& alpha_grid_text, const std::string& theta_grid_text,
              std::uint64_t shots, const SeedOption& seed, const std::string& output_path) {
    const auto alpha_grid = bellsim::text::parse_grid(alpha_grid_text);
    const auto theta_grid = bellsim::text::parse_grid(theta_grid_text);
    if (alpha_grid.empty() || theta_grid.empty()) {
        throw std::invalid_argument("sweep grids must be non-empty");
    }
    const std::uint64_t seed_value = seed.resolve();

    std::ostringstream csv;
    csv << "alpha,theta,s_exact,s_analytic,s_sampled,stderr,shots\n";
    std::uint64_t row = 0;
    for (const double alpha_raw : alpha_grid) {
        const CouplerPhase alpha(alpha_raw);
        for (const double theta : theta_grid) {
            const double exact = bellsim::bell::correlation_simulated(alpha, 0.0, theta);
            const double analytic = bellsim::bell::correlation_analytic(alpha, theta);
            csv << bellsim::text::format_number(alpha_raw) << ','
                << bellsim::text::format_number(theta) << ','
                << bellsim::text::format_number(exact) << ','
                << bellsim::text::format_number(analytic) << ',';
            if (shots > 0) {
                // Row index doubles as the Philox stream id, so every row is
                // an independent, reproducible substream of the run seed.
                const auto estimate = bellsim::sampler::estimate_correlation(
                    alpha, 0.0, theta, {shots, seed_value, false}, row);
                csv << bellsim::text::format_number(estimate.mean) << ','
                    << bellsim::text::format_number(estimate.std_error) << ',' << estimate.shots;
            } else {
                csv << ",,0";
            }
            csv << '\n';
            ++row;
        }
    }

    if (output_path.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(output_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write output file: " + output_path);
        out << csv.str();
    }
    return 0;
}

int run_violation(double step, const std::string& output_path) {
    const auto interval = bellsim::bell::violation_interval(step);
    const double midpoint = 0.5 * (interval.alpha_lo + interval.alpha_hi);
    const auto mid_result = bellsim::bell::chsh_max(CouplerPhase(midpoint));

    std::cout << "violation interval: alpha in (" << std::setprecision(10) << interval.alpha_lo
              << ", " << interval.alpha_hi << ") rad, boundary tolerance " << interval.tolerance
              << "\n";
    std::cout << "CHSH max at midpoint alpha = " << midpoint << ": " << mid_result.abs_value()
              << "\n";

    emit_record(json{{"command", "violation"},
                     {"alpha_lo", interval.alpha_lo},
                     {"alpha_hi", interval.alpha_hi},
                     {"tolerance", interval.tolerance},
                     {"step", step},
                     {"midpoint_alpha", midpoint},
                     {"midpoint_chsh", mid_result.abs_value()}},
                output_path);
    return 0;
}

int run_calibrate(const std::string& alpha_text, int points, std::uint64_t shots,
                  const SeedOption& seed, const std::string& output_path) {
    const CouplerPhase alpha_true(bellsim::text::parse_angle(alpha_text));

    std::vector<double> thetas(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        thetas[static_cast<std::size_t>(i)] = 2.0 * std::numbers::pi * i / points;
    }

    std::vector<bellsim::bell::CalibrationPoint> data;
    if (shots > 0) {
        data = bellsim::sampler::calibration_dataset(alpha_true, thetas,
                                                     {shots, seed.resolve(), false});
    } else {
        for (const double theta : thetas) {
            data.push_back({theta, bellsim::bell::correlation_analytic(alpha_true, theta), 0.0});
        }
    }

    const auto fit = bellsim::bell::calibrate_alpha(data);
    const double error = std::abs(fit.alpha_hat - alpha_true.value());

    std::cout << "alpha_hat = " << std::setprecision(10) << fit.alpha_hat << " rad\n";
    std::cout << "residual rms = " << fit.residual_rms << "\n";
    std::cout << "|alpha_hat - alpha_true| = " << error << "\n";
    if (fit.low_identifiability) std::cout << "warning: low identifiability (alpha near 0)\n";

    emit_record(json{{"command", "calibrate"},
                     {"alpha_true", alpha_true.value()},
                     {"alpha_hat", fit.alpha_hat},
                     {"abs_error", error},
                     {"residual_rms", fit.residual_rms},
                     {"num_points", fit.num_points},
                     {"shots", shots},
                     {"seed", seed.resolve()},
                     {"low_identifiability", fit.low_identifiability}},
                output_path);
    return 0;
}

int run_compile(const std::string& config_path, const std::string& output_path) {
    const auto network = bellsim::device::load_network_config(config_path);
    const auto report = bellsim::device::compile_network(network);

    std::cout << "wave packet: k = " << std::setprecision(8) << report.wavepacket.wave_vector_per_nm
              << " 1/nm, v = " << report.wavepacket.group_velocity_nm_per_fs
              << " nm/fs, lambda = " << report.wavepacket.wavelength_nm << " nm\n";
    std::cout << std::left << std::setw(4) << "#" << std::setw(10) << "kind" << std::setw(7)
              << "qubit" << std::setw(16) << "geometry" << std::setw(14) << "angle"
              << "verdict\n";
    json elements = json::array();
    for (const auto& element : report.elements) {
        std::ostringstream geometry;
        if (element.geometry_nm.has_value()) {
            geometry << std::fixed << std::setprecision(3) << *element.geometry_nm << " nm";
        } else {
            geometry << "-";
        }
        std::ostringstream angle;
        angle << std::fixed << std::setprecision(6) << element.angle_rad << " rad";
        std::cout << std::left << std::setw(4) << element.index << std::setw(10)
                  << bellsim::device::element_kind_name(element.kind) << std::setw(7)
                  << (element.qubit == 0 ? std::string("1+2") : std::to_string(element.qubit))
                  << std::setw(16) << geometry.str() << std::setw(14) << angle.str()
                  << (element.ok ? "ok: " : "FAIL: ") << element.note << "\n";
        elements.push_back(json{{"index", element.index},
                                {"kind", bellsim::device::element_kind_name(element.kind)},
                                {"qubit", element.qubit},
                                {"geometry_nm", element.geometry_nm.has_value()
                                                    ? json(*element.geometry_nm)
                                                    : json(nullptr)},
                                {"angle_rad", element.angle_rad},
                                {"ok", element.ok},
                                {"note", element.note}});
    }
    json record{{"command", "compile"}, {"elements", elements}, {"ok", report.ok}};
    if (report.sync.has_value()) {
        std::cout << "synchronization: skew " << report.sync->skew_fs << " fs ("
                  << (report.sync->ok ? "ok" : "FAIL") << ")\n";
        record["synchronization"] = json{{"skew_fs", report.sync->skew_fs}, {"ok", report.sync->ok}};
    }
    if (!report.ok) {
        std::cout << "compilation failed: " << report.first_failure << "\n";
        record["first_failure"] = report.first_failure;
    }
    emit_record(record, output_path);
    return report.ok ? 0 : 1;
}

int run_sample(const std::string& alpha_text, const std::string& theta1_text,
               const std::string& theta2_text, std::uint64_t shots, bool antithetic,
               const SeedOption& seed, const std::string& output_path) {
    const CouplerPhase alpha(bellsim::text::parse_angle(alpha_text));
    const double theta1 = bellsim::text::parse_angle(theta1_text);
    const double theta2 = bellsim::text::parse_angle(theta2_text);

    const auto estimate = bellsim::sampler::estimate_correlation(
        alpha, theta1, theta2, {shots, seed.resolve(), antithetic});
    const double analytic = bellsim::bell::correlation_analytic(alpha, theta2 - theta1);

    std::cout << "sampled S = " << std::setprecision(10) << estimate.mean << " +/- "
              << estimate.std_error << " (" << estimate.shots << " shots)\n";
    std::cout << "analytic S = " << analytic << "\n";

    emit_record(json{{"command", "sample"},
                     {"alpha", alpha.value()},
                     {"theta1", theta1},
                     {"theta2", theta2},
                     {"mean", estimate.mean},
                     {"std_error", estimate.std_error},
                     {"shots", estimate.shots},
                     {"seed", seed.resolve()},
                     {"analytic", analytic}},
                output_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dual-rail flying-qubit Bell-test workbench"};
    app.require_subcommand(1);

    // chsh
    auto* chsh = app.add_subcommand("chsh", "CHSH value at fixed or optimized analyzer angles");
    std::string chsh_alpha, chsh_angles, chsh_output;
    bool chsh_optimize = false;
    std::uint64_t chsh_shots = 0;
    SeedOption chsh_seed;
    chsh->add_option("--alpha", chsh_alpha, "coupler phase")->required();
    auto* angles_opt = chsh->add_option("--angles", chsh_angles, "four angles a,b,a',b'");
    auto* optimize_opt = chsh->add_flag("--optimize", chsh_optimize, "maximize |S| over angles");
    angles_opt->excludes(optimize_opt);
    chsh->add_option("--shots", chsh_shots, "also sample the CHSH estimator");
    chsh_seed.attach(chsh);
    chsh->add_option("--output", chsh_output, "write the JSON record to a file");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "correlation S over an (alpha, theta) grid as CSV");
    std::string sweep_alpha_grid, sweep_theta_grid, sweep_output;
    std::uint64_t sweep_shots = 0;
    SeedOption sweep_seed;
    sweep->add_option("--alpha-grid", sweep_alpha_grid, "alpha grid start:stop:step")->required();
    sweep->add_option("--theta-grid", sweep_theta_grid, "theta grid start:stop:step")->required();
    sweep->add_option("--shots", sweep_shots, "shots per grid point (0 = exact only)");
    sweep_seed.attach(sweep);
    sweep->add_option("--output", sweep_output, "write CSV to a file instead of stdout");

    // violation
    auto* violation = app.add_subcommand("violation", "locate the coupler-phase violation interval");
    double violation_step = 0.01;
    std::string violation_output;
    violation->add_option("--step", violation_step, "alpha scan step (max 0.01 rad)")
        ->check(CLI::Range(1e-6, 0.01));
    violation->add_option("--output", violation_output, "write the JSON record to a file");

    // calibrate
    auto* calibrate = app.add_subcommand("calibrate", "recover the coupler phase from sampled data");
    std::string calibrate_alpha, calibrate_output;
    int calibrate_points = 16;
    std::uint64_t calibrate_shots = 10000;
    SeedOption calibrate_seed;
    calibrate->add_option("--alpha-true", calibrate_alpha, "coupler phase generating the data")
        ->required();
    calibrate->add_option("--points", calibrate_points, "number of theta points (>= 4)")
        ->check(CLI::Range(4, 1 << 20));
    calibrate->add_option("--shots", calibrate_shots, "shots per point (0 = noiseless)");
    calibrate_seed.attach(calibrate);
    calibrate->add_option("--output", calibrate_output, "write the JSON record to a file");

    // compile
    auto* compile = app.add_subcommand("compile", "compile a device config into physical elements");
    std::string compile_config, compile_output;
    compile->add_option("--config", compile_config, "device config file")
        ->required()
        ->check(CLI::ExistingFile);
    compile->add_option("--output", compile_output, "write the JSON record to a file");

    // sample
    auto* sample = app.add_subcommand("sample", "shot-sampled correlation at one settings pair");
    std::string sample_alpha, sample_theta1 = "0", sample_theta2 = "0", sample_output;
    std::uint64_t sample_shots = 10000;
    bool sample_antithetic = false;
    SeedOption sample_seed;
    sample->add_option("--alpha", sample_alpha, "coupler phase")->required();
    sample->add_option("--theta1", sample_theta1, "first analyzer angle");
    sample->add_option("--theta2", sample_theta2, "second analyzer angle");
    sample->add_option("--shots", sample_shots, "number of shots")->check(CLI::Range(1ULL, ~0ULL));
    sample->add_flag("--antithetic", sample_antithetic, "pair shots as (u, 1-u) draws");
    sample_seed.attach(sample);
    sample->add_option("--output", sample_output, "write the JSON record to a file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (chsh->parsed()) {
            if (!chsh_optimize && angles_opt->count() == 0) {
                throw std::invalid_argument("chsh needs --angles or --optimize");
            }
            return run_chsh(chsh_alpha, chsh_angles, chsh_optimize, chsh_shots, chsh_seed,
                            chsh_output);
        }
        if (sweep->parsed()) {
            return run_sweep(sweep_alpha_grid, sweep_theta_grid, sweep_shots, sweep_seed,
                             sweep_output);
        }
        if (violation->parsed()) return run_violation(violation_step, violation_output);
        if (calibrate->parsed()) {
            return run_calibrate(calibrate_alpha, calibrate_points, calibrate_shots, calibrate_seed,
                                 calibrate_output);
        }
        if (compile->parsed()) return run_compile(compile_config, compile_output);
        if (sample->parsed()) {
            return run_sample(sample_alpha, sample_theta1, sample_theta2, sample_shots,
                              sample_antithetic, sample_seed, sample_output);
        }
    } catch (const std::invalid_argument& error) {
        std::cerr << "usage error: " << error.what() << "\n";
        return 2;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 1;
    }
    return 0;
}
