#include "bellsim/sampler.hpp"

#include <cmath>
#include <stdexcept>

#include "bellsim/kernels.hpp"
#include "bellsim/qcore.hpp"

namespace bellsim::sampler {

namespace {

void require(bool condition, const char* message) {
    if (!condition) throw std::invalid_argument(message);
}

EstimateWithError estimate_from_counts(const std::array<std::uint64_t, 4>& counts,
                                       std::uint64_t shots) {
    // Outcome (i, j) scores (-1)^(i+j): the 00/11 bins count +1, 01/10 -1.
    const std::int64_t plus = static_cast<std::int64_t>(counts[0] + counts[3]);
    const std::int64_t minus = static_cast<std::int64_t>(counts[1] + counts[2]);

    EstimateWithError estimate;
    estimate.shots = shots;
    estimate.mean = static_cast<double>(plus - minus) / static_cast<double>(shots);
    if (shots > 1) {
        // Scores are +-1, so the sample variance is N (1 - mean^2) / (N - 1).
        const double spread = std::max(0.0, 1.0 - estimate.mean * estimate.mean);
        estimate.std_error = std::sqrt(spread / static_cast<double>(shots - 1));
    }
    return estimate;
}

}  // namespace

EstimateWithError estimate_correlation(bell::CouplerPhase alpha, double theta1, double theta2,
                                       const ShotPlan& plan, std::uint64_t stream_id) {
    require(plan.shots >= 1, "shot plan needs at least one shot");

    // The pre-measurement state is shot-independent: rotate once, then sample
    // the four-outcome distribution shot by shot.
    qcore::StateVector state = bell::prepare_bell(alpha);
    state = qcore::apply_gate(state, qcore::measurement_unitary(bell::oyz_direction(theta1)), 1);
    state = qcore::apply_gate(state, qcore::measurement_unitary(bell::oyz_direction(theta2)), 2);
    const auto cdf = qcore::outcome_cdf(state);

    std::array<std::uint64_t, 4> counts{};
    kernels::count_outcomes(cdf, plan.shots, plan.seed, stream_id, 0, plan.antithetic, counts);
    return estimate_from_counts(counts, plan.shots);
}

EstimateWithError estimate_chsh(bell::CouplerPhase alpha, const bell::AngleSettings& settings,
                                const ShotPlan& plan) {
    require(plan.shots >= 4, "CHSH estimation needs at least one shot per settings pair");

    const std::array<std::pair<double, double>, 4> pairs = {{
        {settings.theta_a, settings.theta_b},
        {settings.theta_a2, settings.theta_b},
        {settings.theta_a2, settings.theta_b2},
        {settings.theta_a, settings.theta_b2},
    }};
    const std::array<double, 4> signs = {1.0, 1.0, 1.0, -1.0};

    EstimateWithError combined;
    double variance = 0.0;
    for (std::uint64_t k = 0; k < 4; ++k) {
        ShotPlan pair_plan = plan;
        pair_plan.shots = plan.shots / 4 + (k < plan.shots % 4 ? 1 : 0);
        const auto estimate =
            estimate_correlation(alpha, pairs[k].first, pairs[k].second, pair_plan, k);
        combined.mean += signs[k] * estimate.mean;
        variance += estimate.std_error * estimate.std_error;
        combined.shots += estimate.shots;
    }
    combined.std_error = std::sqrt(variance);
    return combined;
}

std::vector<bell::CalibrationPoint> calibration_dataset(bell::CouplerPhase alpha_true,
                                                        std::span<const double> thetas,
                                                        const ShotPlan& plan) {
    require(!thetas.empty(), "calibration dataset needs at least one theta");
    std::vector<bell::CalibrationPoint> points;
    points.reserve(thetas.size());
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        const auto estimate = estimate_correlation(alpha_true, 0.0, thetas[i], plan, i);
        points.push_back({thetas[i], estimate.mean, estimate.std_error});
    }
    return points;
}

}  // namespace bellsim::sampler
