#pragma once

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "bellsim/qcore.hpp"

namespace bellsim::bell {

// Controlled-phase angle of the Coulomb coupler, canonical in [0, 2*pi).
class CouplerPhase {
  public:
    explicit CouplerPhase(double alpha_radians);

    double value() const noexcept { return alpha_; }

  private:
    double alpha_;
};

// The four Oyz-plane analyzer angles: a, b and the primed settings a', b'.
struct AngleSettings {
    double theta_a = 0.0;
    double theta_b = 0.0;
    double theta_a2 = 0.0;
    double theta_b2 = 0.0;
};

struct ChshResult {
    // P(a,b), P(a',b), P(a',b'), P(a,b').
    std::array<double, 4> correlations{};
    // Signed combination P(a,b) + P(a',b) + P(a',b') - P(a,b').
    double chsh_value = 0.0;
    bool violated = false;
    AngleSettings settings{};

    double abs_value() const noexcept { return std::abs(chsh_value); }
};

// Derivative-free search over the four analyzer angles: coarse-grid seeding,
// Nelder-Mead restarts, then a per-axis golden-section polish.
struct OptimizerConfig {
    int coarse_points_per_axis = 4;
    int restarts = 8;
    int max_iterations = 600;
    double simplex_tolerance = 1e-9;
    double value_tolerance = 1e-12;
    int polish_sweeps = 3;
};

class OptimizerError : public std::runtime_error {
  public:
    OptimizerError(const std::string& message, ChshResult best_so_far)
        : std::runtime_error(message), best(best_so_far) {}

    ChshResult best;
};

struct ViolationInterval {
    double alpha_lo = 0.0;
    double alpha_hi = 0.0;
    double tolerance = 0.0;
};

struct CalibrationPoint {
    double theta = 0.0;
    double s_estimate = 0.0;
    double std_error = 0.0;
};

struct CalibrationFit {
    double alpha_hat = 0.0;
    double residual_rms = 0.0;
    int num_points = 0;
    // Set when the fitted model amplitude vanishes (alpha ~ 0): the data then
    // constrain the phase of the sinusoid only trivially.
    bool low_identifiability = false;
};

// Direction (0, sin theta, cos theta) in the Oyz plane.
qcore::MeasurementDirection oyz_direction(double theta);

// Runs [H q1, H q2, controlled_phase(alpha), H q2] on |11>. alpha = pi yields
// the singlet (|01> - |10>)/sqrt(2).
qcore::StateVector prepare_bell(CouplerPhase alpha);

// Measurement network reduced to five gates: analyzer fixed on qubit 1,
// angle theta on qubit 2.
qcore::StateVector five_gate_network(CouplerPhase alpha, double theta);

// Eight-gate variant with independent settings applied after entanglement;
// theta1 = 0 reproduces the five-gate state exactly.
qcore::StateVector aspect_network(CouplerPhase alpha, double theta1, double theta2);

// -a.b, the singlet correlation for arbitrary analyzer directions.
double singlet_correlation(const qcore::MeasurementDirection& a,
                           const qcore::MeasurementDirection& b);

// -sin(alpha/2) sin(theta + alpha/2) with theta the analyzer-angle difference.
double correlation_analytic(CouplerPhase alpha, double theta);

// Exact simulation: prepares the coupler state and measures along the two
// Oyz directions; agrees with correlation_analytic(alpha, theta2 - theta1).
double correlation_simulated(CouplerPhase alpha, double theta1, double theta2);

ChshResult chsh_value(CouplerPhase alpha, const AngleSettings& settings);

// Maximizes |chsh_value| over the four angles. Throws OptimizerError carrying
// the best result seen when no restart converges.
ChshResult chsh_max(CouplerPhase alpha, const OptimizerConfig& config = {});

// Scans alpha over [0, 2*pi), then bisects the |S| > 2 predicate down to a
// 1e-3 boundary. alpha_step must be positive and at most 0.01.
ViolationInterval violation_interval(double alpha_step = 0.01, const OptimizerConfig& config = {});

// Weighted least-squares fit of the coupler-phase model to measured
// correlations: pi/64 grid over [0, 2*pi) followed by golden-section
// refinement. Needs >= 4 points with thetas not all congruent mod pi.
CalibrationFit calibrate_alpha(std::span<const CalibrationPoint> data);

}  // namespace bellsim::bell
