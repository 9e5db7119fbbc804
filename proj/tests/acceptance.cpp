// Acceptance suite: end-to-end checks of the workbench against its contract,
// one printed verdict per criterion. Exits nonzero if any criterion fails.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bellsim/bell.hpp"
#include "bellsim/device.hpp"
#include "bellsim/qcore.hpp"
#include "bellsim/sampler.hpp"
#include "cli_helpers.hpp"
#include "oracles.hpp"

using namespace bellsim;
using bell::CouplerPhase;
using json = nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;
const double kChshIdeal = 2.0 * std::sqrt(2.0);

int g_failures = 0;

void criterion(int number, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%2d] %s  %-46s %s\n", number, pass ? "PASS" : "FAIL", name.c_str(),
                detail.c_str());
    if (!pass) ++g_failures;
}

std::string scalar_detail(const char* label, double value, double tol) {
    std::ostringstream out;
    out << label << " = " << value << ", tol " << tol;
    return out.str();
}

using Matrix2 = std::array<std::complex<double>, 4>;

Matrix2 to_matrix(const qcore::GateMatrix& gate) {
    return {gate.at(0, 0), gate.at(0, 1), gate.at(1, 0), gate.at(1, 1)};
}

Matrix2 multiply(const Matrix2& a, const Matrix2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

Matrix2 dagger(const Matrix2& a) {
    return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])};
}

// 1: |S| at the sqrt(2)/2 geometry equals 2 sqrt 2.
void check_ideal_chsh() {
    const auto result =
        bell::chsh_value(CouplerPhase(kPi), {0.0, kPi / 4.0, kPi / 2.0, 3.0 * kPi / 4.0});
    const double error = std::abs(result.abs_value() - kChshIdeal);
    criterion(1, "ideal CHSH value at the 2sqrt2 angles", error < 1e-10 && result.violated,
              scalar_detail("| |S| - 2sqrt2 |", error, 1e-10));
}

// 2: exact simulation equals the closed form on a 33 x 33 x 17 grid.
void check_oracle_equivalence() {
    double worst = 0.0;
    for (int ia = 0; ia < 17; ++ia) {
        const CouplerPhase alpha(2.0 * kPi * ia / 17.0);
        for (int i1 = 0; i1 < 33; ++i1) {
            for (int i2 = 0; i2 < 33; ++i2) {
                const double theta1 = -kPi + 2.0 * kPi * i1 / 33.0;
                const double theta2 = -kPi + 2.0 * kPi * i2 / 33.0;
                const double delta =
                    std::abs(bell::correlation_simulated(alpha, theta1, theta2) -
                             bell::correlation_analytic(alpha, theta2 - theta1));
                worst = std::max(worst, delta);
            }
        }
    }
    criterion(2, "closed-form equivalence on 33x33x17 grid", worst < 1e-10,
              scalar_detail("max |sim - analytic|", worst, 1e-10));
}

// 3: the ideal coupler recovers the singlet correlation -cos theta.
void check_singlet_recovery() {
    double worst = 0.0;
    for (int i = 0; i < 64; ++i) {
        const double theta = -kPi + 2.0 * kPi * i / 64.0;
        worst = std::max(worst, std::abs(bell::correlation_simulated(CouplerPhase(kPi), 0.0, theta) +
                                         std::cos(theta)));
    }
    criterion(3, "singlet correlation -cos(theta), 64 thetas", worst < 1e-10,
              scalar_detail("max |S(pi,theta) + cos theta|", worst, 1e-10));
}

// 4: the violation interval is (pi/2, 3pi/2) to 1e-3.
void check_violation_interval() {
    const auto interval = bell::violation_interval(0.01);
    const double lo_error = std::abs(interval.alpha_lo - kPi / 2.0);
    const double hi_error = std::abs(interval.alpha_hi - 3.0 * kPi / 2.0);
    std::ostringstream detail;
    detail << "lo err = " << lo_error << ", hi err = " << hi_error << ", tol 1e-3";
    criterion(4, "violation interval (pi/2, 3pi/2)", lo_error < 1e-3 && hi_error < 1e-3,
              detail.str());
}

// 5: optimizer against the 2sqrt2 |sin(alpha/2)| envelope, with the envelope
// first confirmed by a dense four-angle grid search on the closed form.
void check_envelope() {
    double grid_gap = 0.0;
    bool grid_bounded = true;
    for (const double alpha : {kPi, 2.0 * kPi / 3.0, kPi / 2.0 + 0.1}) {
        const double envelope = kChshIdeal * std::abs(std::sin(alpha / 2.0));
        const double grid_max = oracles::dense_chsh_grid_max(alpha, 128);
        grid_bounded = grid_bounded && grid_max <= envelope + 1e-9;
        grid_gap = std::max(grid_gap, envelope - grid_max);
    }

    double worst = 0.0;
    for (int i = 0; i < 64; ++i) {
        const double alpha = 2.0 * kPi * i / 64.0;
        const double envelope = kChshIdeal * std::abs(std::sin(alpha / 2.0));
        worst = std::max(worst, std::abs(bell::chsh_max(CouplerPhase(alpha)).abs_value() - envelope));
    }

    std::ostringstream detail;
    detail << "grid gap = " << grid_gap << " (tol 5e-3), optimizer err = " << worst
           << " (tol 1e-6)";
    criterion(5, "CHSH envelope 2sqrt2 |sin(alpha/2)|",
              grid_bounded && grid_gap < 5e-3 && worst < 1e-6, detail.str());
}

// 6: preparation normalization and singlet recovery at alpha = pi.
void check_preparation() {
    double worst_norm = 0.0;
    for (int i = 0; i < 256; ++i) {
        const double alpha = 2.0 * kPi * i / 256.0;
        worst_norm = std::max(worst_norm,
                              std::abs(bell::prepare_bell(CouplerPhase(alpha)).norm() - 1.0));
    }

    const double s = 1.0 / std::sqrt(2.0);
    const std::array<qcore::Complex, 4> singlet_amps = {{{0.0, 0.0}, {s, 0.0}, {-s, 0.0},
                                                         {0.0, 0.0}}};
    const auto singlet = qcore::StateVector::from_amplitudes(2, singlet_amps);
    const auto prepared = bell::prepare_bell(CouplerPhase(kPi));
    const double phase_gap = std::abs(std::abs(qcore::overlap(prepared, singlet)) - 1.0);

    std::ostringstream detail;
    detail << "max norm err = " << worst_norm << ", singlet overlap gap = " << phase_gap
           << ", tol 1e-12";
    criterion(6, "preparation norm and alpha = pi singlet", worst_norm < 1e-12 && phase_gap < 1e-12,
              detail.str());
}

// 7: U^dagger sigma_z U = sigma_n over a randomized direction set.
void check_measurement_basis() {
    const Matrix2 sigma_z = {1.0, 0.0, 0.0, -1.0};
    rng::Stream stream(64, 0);
    double worst = 0.0;
    for (int i = 0; i < 64; ++i) {
        const auto dir = oracles::random_direction(stream);
        const auto u = to_matrix(qcore::measurement_unitary(dir));
        const auto conjugated = multiply(dagger(u), multiply(sigma_z, u));
        const auto n = dir.unit_vector();
        const Matrix2 sigma_n = {std::complex<double>{n[2], 0.0},
                                 std::complex<double>{n[0], -n[1]},
                                 std::complex<double>{n[0], n[1]},
                                 std::complex<double>{-n[2], 0.0}};
        for (int e = 0; e < 4; ++e) {
            worst = std::max(worst, std::abs(conjugated[static_cast<std::size_t>(e)] -
                                             sigma_n[static_cast<std::size_t>(e)]));
        }
    }
    criterion(7, "U^dagger sigma_z U = sigma_n, 64 directions", worst < 1e-12,
              scalar_detail("max entry err", worst, 1e-12));
}

// 8: shot-noise layer at the ideal point, plus the 1/sqrt(N) law.
void check_statistics() {
    const bell::AngleSettings settings{0.0, 3.0 * kPi / 4.0, 3.0 * kPi / 2.0, kPi / 4.0};
    const auto estimate =
        sampler::estimate_chsh(CouplerPhase(kPi), settings, {400000, 20260811, false});
    const double bias = std::abs(std::abs(estimate.mean) - kChshIdeal);
    const bool within_bars = bias < 5.0 * estimate.std_error;

    std::array<double, 3> scaled{};
    const std::array<std::uint64_t, 3> shot_counts = {1000, 4000, 16000};
    for (std::size_t i = 0; i < 3; ++i) {
        const auto run =
            sampler::estimate_chsh(CouplerPhase(kPi), settings, {shot_counts[i], 4242, false});
        scaled[i] = run.std_error * std::sqrt(static_cast<double>(shot_counts[i]));
    }
    const double spread = *std::max_element(scaled.begin(), scaled.end()) /
                          *std::min_element(scaled.begin(), scaled.end());

    std::ostringstream detail;
    detail << "| |S| - 2sqrt2 | = " << bias << " vs 5 stderr = " << 5.0 * estimate.std_error
           << "; sqrt(N) stderr spread = " << spread << " (tol 1.2)";
    criterion(8, "sampled CHSH and 1/sqrt(N) error law", within_bars && spread < 1.2,
              detail.str());
}

// 9: coupler calibration, sampled and noiseless.
void check_calibration() {
    std::vector<double> thetas;
    for (int i = 0; i < 16; ++i) thetas.push_back(2.0 * kPi * i / 16.0);

    const auto data =
        sampler::calibration_dataset(CouplerPhase(2.0), thetas, {10000, 20260811, false});
    const double sampled_error = std::abs(bell::calibrate_alpha(data).alpha_hat - 2.0);

    std::vector<bell::CalibrationPoint> exact;
    for (const double theta : thetas) {
        exact.push_back({theta, bell::correlation_analytic(CouplerPhase(2.0), theta), 0.0});
    }
    const double exact_error = std::abs(bell::calibrate_alpha(exact).alpha_hat - 2.0);

    std::ostringstream detail;
    detail << "sampled err = " << sampled_error << " (tol 0.05), noiseless err = " << exact_error
           << " (tol 1e-6)";
    criterion(9, "coupler calibration recovers alpha = 2.0", sampled_error < 0.05 && exact_error < 1e-6,
              detail.str());
}

// 10: device compiler against hand-derived values and the transfer matrix.
void check_device() {
    const device::MaterialParams gaas{0.067};
    const auto packet = device::wavepacket_from_energy(10.0, gaas);

    const long double mass_l = 0.067L * 5685.630L;
    const long double k_hand =
        std::sqrt(2.0L * mass_l * 10.0L) / 658.2119569L;
    const double k_error =
        std::abs(packet.wave_vector_per_nm - static_cast<double>(k_hand)) /
        packet.wave_vector_per_nm;

    const double lt = device::transfer_length(packet, 800.0);
    const bool classes_ok =
        device::splitter_rotation({lt / 2.0, 800.0}, packet).classification ==
            device::SplitterClass::balanced &&
        device::splitter_rotation({lt, 800.0}, packet).classification ==
            device::SplitterClass::not_gate &&
        device::splitter_rotation({2.0 * lt, 800.0}, packet).classification ==
            device::SplitterClass::off;

    const double mass = 0.067 * device::kElectronMassMevFs2PerNm2;
    const double k_region = std::sqrt(2.0 * mass * 15.0) / device::kHbarMevFs;
    double worst_transmission_gap = 0.0;
    bool reflection_ok = true;
    for (int n = 1; n <= 5; ++n) {
        const double width = n * kPi / k_region;
        reflection_ok = reflection_ok &&
                        device::well_phase({-5.0, width, device::PhaseWellMode::well}, packet, gaas)
                            .reflection_ok;
        worst_transmission_gap = std::max(
            worst_transmission_gap,
            std::abs(oracles::transfer_matrix_transmission(packet.wave_vector_per_nm, k_region,
                                                           width) -
                     1.0));
    }

    std::ostringstream detail;
    detail << "k rel err = " << k_error << " (tol 1e-9), classes "
           << (classes_ok ? "ok" : "WRONG") << ", max |T|-1 = " << worst_transmission_gap
           << " (tol 1e-9)";
    criterion(10, "device compiler oracles",
              k_error < 1e-9 && classes_ok && reflection_ok && worst_transmission_gap < 1e-9,
              detail.str());
}

// 11: CLI goldens - byte-identical sweep CSV and the violation JSON record.
void check_cli_goldens() {
    namespace fs = std::filesystem;
    const std::string source_dir = BELLSIM_SOURCE_DIR;

    bool sweep_ok = false;
    std::string sweep_note = "sweep CSV mismatch";
    const auto csv_path = testcli::temp_path("acceptance_sweep.csv");
    const auto sweep = testcli::run_cli(
        "sweep --alpha-grid \"pi/2:3pi/2:pi/2\" --theta-grid \"0:2pi:pi/4\" --shots 400 "
        "--seed 20260811 --output " +
        csv_path.string());
    if (sweep.exit_code == 0) {
        const auto produced = testcli::read_file(csv_path);
        const auto golden = testcli::read_file(source_dir + "/tests/golden/sweep_golden.csv");
        sweep_ok = produced == golden;
        if (sweep_ok) sweep_note = "sweep CSV byte-identical";
        fs::remove(csv_path);
    } else {
        sweep_note = "sweep exited with " + std::to_string(sweep.exit_code);
    }

    bool violation_ok = false;
    std::string violation_note;
    const auto json_path = testcli::temp_path("acceptance_violation.json");
    const auto violation = testcli::run_cli("violation --step 0.01 --output " + json_path.string());
    if (violation.exit_code == 0) {
        const auto record = json::parse(testcli::read_file(json_path));
        const double lo_error = std::abs(record["alpha_lo"].get<double>() - kPi / 2.0);
        const double hi_error = std::abs(record["alpha_hi"].get<double>() - 3.0 * kPi / 2.0);
        violation_ok = lo_error < 1e-3 && hi_error < 1e-3;
        std::ostringstream note;
        note << "violation JSON lo err = " << lo_error << ", hi err = " << hi_error;
        violation_note = note.str();
        fs::remove(json_path);
    } else {
        violation_note = "violation exited with " + std::to_string(violation.exit_code);
    }

    criterion(11, "CLI goldens (sweep CSV, violation JSON)", sweep_ok && violation_ok,
              sweep_note + "; " + violation_note);
}

}  // namespace

int main() {
    std::printf("bellsim acceptance suite\n");
    check_ideal_chsh();
    check_oracle_equivalence();
    check_singlet_recovery();
    check_violation_interval();
    check_envelope();
    check_preparation();
    check_measurement_basis();
    check_statistics();
    check_calibration();
    check_device();
    check_cli_goldens();

    if (g_failures == 0) {
        std::printf("all 11 criteria passed\n");
        return 0;
    }
    std::printf("%d criteria FAILED\n", g_failures);
    return 1;
}
