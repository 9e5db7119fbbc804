#include "bellsim/bell.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace bellsim::bell {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBoundaryTol = 1e-3;

using qcore::apply_gate;
using qcore::StateVector;

double wrap_to_2pi(double angle) {
    double reduced = std::fmod(angle, kTwoPi);
    if (reduced < 0.0) reduced += kTwoPi;
    if (reduced == kTwoPi) reduced = 0.0;
    return reduced;
}

// Fixed-alpha CHSH evaluation reusing the prepared state and the four
// measurement unitaries; identical gate sequence to correlation_simulated.
class ChshEvaluator {
  public:
    explicit ChshEvaluator(CouplerPhase alpha) : psi_(prepare_bell(alpha)) {}

    ChshResult evaluate(const AngleSettings& settings) const {
        const auto u_a = qcore::measurement_unitary(oyz_direction(settings.theta_a));
        const auto u_a2 = qcore::measurement_unitary(oyz_direction(settings.theta_a2));
        const auto u_b = qcore::measurement_unitary(oyz_direction(settings.theta_b));
        const auto u_b2 = qcore::measurement_unitary(oyz_direction(settings.theta_b2));

        const StateVector side_a = apply_gate(psi_, u_a, 1);
        const StateVector side_a2 = apply_gate(psi_, u_a2, 1);

        ChshResult result;
        result.settings = settings;
        result.correlations = {
            qcore::sigma_z_pair(apply_gate(side_a, u_b, 2)),
            qcore::sigma_z_pair(apply_gate(side_a2, u_b, 2)),
            qcore::sigma_z_pair(apply_gate(side_a2, u_b2, 2)),
            qcore::sigma_z_pair(apply_gate(side_a, u_b2, 2)),
        };
        result.chsh_value = result.correlations[0] + result.correlations[1] +
                            result.correlations[2] - result.correlations[3];
        result.violated = std::abs(result.chsh_value) > 2.0;
        return result;
    }

    double abs_chsh(const std::array<double, 4>& angles) const {
        return evaluate({angles[0], angles[1], angles[2], angles[3]}).abs_value();
    }

  private:
    StateVector psi_;
};

struct SimplexPoint {
    std::array<double, 4> x{};
    double value = 0.0;  // objective: -|S|
};

double simplex_diameter(const std::array<SimplexPoint, 5>& simplex) {
    double diameter = 0.0;
    for (int i = 1; i < 5; ++i) {
        double dist = 0.0;
        for (int d = 0; d < 4; ++d) {
            const double delta = simplex[i].x[d] - simplex[0].x[d];
            dist += delta * delta;
        }
        diameter = std::max(diameter, std::sqrt(dist));
    }
    return diameter;
}

// Standard Nelder-Mead on four angles. Returns the best point and whether the
// simplex collapsed below the tolerances before the iteration cap.
std::pair<SimplexPoint, bool> nelder_mead(const ChshEvaluator& evaluator,
                                          const std::array<double, 4>& start,
                                          const OptimizerConfig& config) {
    const auto objective = [&evaluator](const std::array<double, 4>& x) {
        return -evaluator.abs_chsh(x);
    };

    std::array<SimplexPoint, 5> simplex;
    simplex[0] = {start, objective(start)};
    for (int d = 0; d < 4; ++d) {
        auto x = start;
        x[d] += 0.35;
        simplex[d + 1] = {x, objective(x)};
    }

    bool converged = false;
    for (int iter = 0; iter < config.max_iterations; ++iter) {
        std::sort(simplex.begin(), simplex.end(),
                  [](const SimplexPoint& a, const SimplexPoint& b) { return a.value < b.value; });

        if (simplex[4].value - simplex[0].value < config.value_tolerance &&
            simplex_diameter(simplex) < config.simplex_tolerance) {
            converged = true;
            break;
        }

        std::array<double, 4> centroid{};
        for (int i = 0; i < 4; ++i) {
            for (int d = 0; d < 4; ++d) centroid[d] += simplex[i].x[d] / 4.0;
        }

        const auto blend = [&centroid](const std::array<double, 4>& x, double coeff) {
            std::array<double, 4> out{};
            for (int d = 0; d < 4; ++d) out[d] = centroid[d] + coeff * (x[d] - centroid[d]);
            return out;
        };

        const auto reflected = blend(simplex[4].x, -1.0);
        const double f_reflected = objective(reflected);
        if (f_reflected < simplex[0].value) {
            const auto expanded = blend(simplex[4].x, -2.0);
            const double f_expanded = objective(expanded);
            simplex[4] = (f_expanded < f_reflected) ? SimplexPoint{expanded, f_expanded}
                                                    : SimplexPoint{reflected, f_reflected};
            continue;
        }
        if (f_reflected < simplex[3].value) {
            simplex[4] = {reflected, f_reflected};
            continue;
        }
        const auto contracted = blend(simplex[4].x, 0.5);
        const double f_contracted = objective(contracted);
        if (f_contracted < simplex[4].value) {
            simplex[4] = {contracted, f_contracted};
            continue;
        }
        for (int i = 1; i < 5; ++i) {
            for (int d = 0; d < 4; ++d) {
                simplex[i].x[d] = simplex[0].x[d] + 0.5 * (simplex[i].x[d] - simplex[0].x[d]);
            }
            simplex[i].value = objective(simplex[i].x);
        }
    }

    std::sort(simplex.begin(), simplex.end(),
              [](const SimplexPoint& a, const SimplexPoint& b) { return a.value < b.value; });
    return {simplex[0], converged};
}

// Golden-section maximization of |S| along one axis.
double golden_polish_axis(const ChshEvaluator& evaluator, std::array<double, 4>& angles, int axis,
                          double halfwidth) {
    constexpr double kInvPhi = 0.6180339887498949;
    double lo = angles[axis] - halfwidth;
    double hi = angles[axis] + halfwidth;
    const auto value_at = [&](double x) {
        auto probe = angles;
        probe[axis] = x;
        return evaluator.abs_chsh(probe);
    };
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = value_at(x1);
    double f2 = value_at(x2);
    while (hi - lo > 1e-12) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = value_at(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = value_at(x1);
        }
    }
    angles[axis] = 0.5 * (lo + hi);
    return value_at(angles[axis]);
}

}  // namespace

CouplerPhase::CouplerPhase(double alpha_radians) {
    if (!std::isfinite(alpha_radians)) {
        throw std::invalid_argument("coupler phase must be finite");
    }
    alpha_ = wrap_to_2pi(alpha_radians);
}

qcore::MeasurementDirection oyz_direction(double theta) { return {theta, kPi / 2.0}; }

StateVector prepare_bell(CouplerPhase alpha) {
    StateVector state = StateVector::basis(2, 0b11);
    const auto h = qcore::hadamard();
    state = apply_gate(state, h, 1);
    state = apply_gate(state, h, 2);
    state = apply_gate(state, qcore::controlled_phase(alpha.value()), {1, 2});
    state = apply_gate(state, h, 2);
    return state;
}

StateVector five_gate_network(CouplerPhase alpha, double theta) {
    StateVector state = StateVector::basis(2, 0b11);
    const auto h = qcore::hadamard();
    state = apply_gate(state, h, 1);
    state = apply_gate(state, h, 2);
    state = apply_gate(state, qcore::controlled_phase(alpha.value()), {1, 2});
    state = apply_gate(state, qcore::phase_shift(theta), 2);
    state = apply_gate(state, h, 2);
    return state;
}

StateVector aspect_network(CouplerPhase alpha, double theta1, double theta2) {
    StateVector state = StateVector::basis(2, 0b11);
    const auto h = qcore::hadamard();
    state = apply_gate(state, h, 1);
    state = apply_gate(state, h, 2);
    state = apply_gate(state, qcore::controlled_phase(alpha.value()), {1, 2});
    state = apply_gate(state, h, 1);
    state = apply_gate(state, qcore::phase_shift(theta1), 1);
    state = apply_gate(state, h, 1);
    state = apply_gate(state, qcore::phase_shift(theta2), 2);
    state = apply_gate(state, h, 2);
    return state;
}

double singlet_correlation(const qcore::MeasurementDirection& a,
                           const qcore::MeasurementDirection& b) {
    const auto va = a.unit_vector();
    const auto vb = b.unit_vector();
    return -(va[0] * vb[0] + va[1] * vb[1] + va[2] * vb[2]);
}

double correlation_analytic(CouplerPhase alpha, double theta) {
    const double half = alpha.value() / 2.0;
    return -std::sin(half) * std::sin(theta + half);
}

double correlation_simulated(CouplerPhase alpha, double theta1, double theta2) {
    return qcore::expectation_pair(prepare_bell(alpha), oyz_direction(theta1),
                                   oyz_direction(theta2));
}

ChshResult chsh_value(CouplerPhase alpha, const AngleSettings& settings) {
    return ChshEvaluator(alpha).evaluate(settings);
}

ChshResult chsh_max(CouplerPhase alpha, const OptimizerConfig& config) {
    if (config.coarse_points_per_axis < 2 || config.restarts < 1 || config.max_iterations < 1 ||
        config.simplex_tolerance <= 0.0 || config.value_tolerance <= 0.0) {
        throw std::invalid_argument("optimizer config must have positive bounds");
    }

    const ChshEvaluator evaluator(alpha);

    // Coarse seeding over all four angles; the landscape has many equivalent
    // optima, so the best few cells make good restart points.
    const int n = config.coarse_points_per_axis;
    std::vector<SimplexPoint> seeds;
    seeds.reserve(static_cast<std::size_t>(n) * n * n * n);
    for (int ia = 0; ia < n; ++ia) {
        for (int ib = 0; ib < n; ++ib) {
            for (int ia2 = 0; ia2 < n; ++ia2) {
                for (int ib2 = 0; ib2 < n; ++ib2) {
                    const std::array<double, 4> x = {
                        kTwoPi * ia / n, kTwoPi * ib / n, kTwoPi * ia2 / n, kTwoPi * ib2 / n};
                    seeds.push_back({x, -evaluator.abs_chsh(x)});
                }
            }
        }
    }
    std::sort(seeds.begin(), seeds.end(),
              [](const SimplexPoint& a, const SimplexPoint& b) { return a.value < b.value; });

    std::optional<SimplexPoint> best;
    bool any_converged = false;
    const int restarts = std::min<int>(config.restarts, static_cast<int>(seeds.size()));
    for (int i = 0; i < restarts; ++i) {
        auto [point, converged] = nelder_mead(evaluator, seeds[static_cast<std::size_t>(i)].x, config);
        any_converged = any_converged || converged;
        if (!best || point.value < best->value) best = point;
    }

    auto angles = best->x;
    for (int sweep = 0; sweep < config.polish_sweeps; ++sweep) {
        for (int axis = 0; axis < 4; ++axis) {
            golden_polish_axis(evaluator, angles, axis, 0.1);
        }
    }

    ChshResult result = evaluator.evaluate({angles[0], angles[1], angles[2], angles[3]});
    if (!any_converged) {
        throw OptimizerError("CHSH optimizer did not converge within iteration bounds", result);
    }
    return result;
}

ViolationInterval violation_interval(double alpha_step, const OptimizerConfig& config) {
    if (!(alpha_step > 0.0) || alpha_step > 0.01) {
        throw std::invalid_argument("alpha step must be positive and at most 0.01");
    }

    const auto exceeds = [&config](double alpha) {
        return chsh_max(CouplerPhase(alpha), config).abs_value() > 2.0;
    };

    const auto n_points = static_cast<std::size_t>(std::ceil(kTwoPi / alpha_step)) + 1;
    std::vector<char> above(n_points);
    std::vector<double> grid(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        grid[i] = std::min(static_cast<double>(i) * alpha_step, kTwoPi);
        above[i] = exceeds(grid[i]) ? 1 : 0;
    }

    std::size_t first_above = n_points;
    std::size_t last_above = 0;
    for (std::size_t i = 0; i < n_points; ++i) {
        if (above[i] != 0) {
            if (first_above == n_points) first_above = i;
            last_above = i;
        }
    }
    if (first_above == n_points || first_above == 0 || last_above + 1 >= n_points) {
        throw std::runtime_error("violation scan found no interior crossing");
    }

    const auto bisect = [&exceeds](double lo, double hi, bool rising) {
        while (hi - lo > kBoundaryTol) {
            const double mid = 0.5 * (lo + hi);
            const bool mid_above = exceeds(mid);
            if (mid_above == rising) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        return 0.5 * (lo + hi);
    };

    ViolationInterval interval;
    interval.alpha_lo = bisect(grid[first_above - 1], grid[first_above], true);
    interval.alpha_hi = bisect(grid[last_above], grid[last_above + 1], false);
    interval.tolerance = kBoundaryTol;
    return interval;
}

CalibrationFit calibrate_alpha(std::span<const CalibrationPoint> data) {
    if (data.size() < 4) {
        throw std::invalid_argument("calibration needs at least 4 data points");
    }
    bool spans_angles = false;
    for (const auto& point : data) {
        if (!std::isfinite(point.theta) || !std::isfinite(point.s_estimate)) {
            throw std::invalid_argument("calibration data must be finite");
        }
        if (std::abs(std::sin(point.theta - data[0].theta)) > 1e-9) spans_angles = true;
    }
    if (!spans_angles) {
        throw std::invalid_argument("calibration thetas are all congruent mod pi");
    }

    bool weighted = true;
    for (const auto& point : data) weighted = weighted && point.std_error > 0.0;

    const auto weighted_sse = [&data, weighted](double alpha) {
        double sse = 0.0;
        const double half = alpha / 2.0;
        for (const auto& point : data) {
            const double model = -std::sin(half) * std::sin(point.theta + half);
            const double residual = point.s_estimate - model;
            const double weight = weighted ? 1.0 / (point.std_error * point.std_error) : 1.0;
            sse += weight * residual * residual;
        }
        return sse;
    };

    // Global pi/64 grid, then golden-section refinement around the best cell.
    const double grid_step = kPi / 64.0;
    double best_alpha = 0.0;
    double best_sse = weighted_sse(0.0);
    for (int k = 1; k < 128; ++k) {
        const double alpha = k * grid_step;
        const double sse = weighted_sse(alpha);
        if (sse < best_sse) {
            best_sse = sse;
            best_alpha = alpha;
        }
    }

    constexpr double kInvPhi = 0.6180339887498949;
    double lo = best_alpha - grid_step;
    double hi = best_alpha + grid_step;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = weighted_sse(x1);
    double f2 = weighted_sse(x2);
    while (hi - lo > 1e-10) {
        if (f1 > f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = weighted_sse(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = weighted_sse(x1);
        }
    }

    CalibrationFit fit;
    fit.alpha_hat = wrap_to_2pi(0.5 * (lo + hi));
    // 0 and 2*pi are the same physical phase; report the seam as 0.
    if (fit.alpha_hat < 1e-8 || kTwoPi - fit.alpha_hat < 1e-8) fit.alpha_hat = 0.0;
    fit.num_points = static_cast<int>(data.size());

    double sum_sq = 0.0;
    const double half = fit.alpha_hat / 2.0;
    for (const auto& point : data) {
        const double model = -std::sin(half) * std::sin(point.theta + half);
        sum_sq += (point.s_estimate - model) * (point.s_estimate - model);
    }
    fit.residual_rms = std::sqrt(sum_sq / static_cast<double>(data.size()));
    fit.low_identifiability = std::abs(std::sin(half)) < 1e-6;
    return fit;
}

}  // namespace bellsim::bell
