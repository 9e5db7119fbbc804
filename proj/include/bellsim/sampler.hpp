#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bellsim/bell.hpp"

namespace bellsim::sampler {

struct ShotPlan {
    std::uint64_t shots = 1;
    std::uint64_t seed = 0;
    bool antithetic = false;
};

struct EstimateWithError {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t shots = 0;
};

// Shot-sampled correlation at the given analyzer angles. Shot i of a run is
// drawn from Philox stream (seed, stream_id, i): runs are reproducible bit
// for bit and batches over disjoint shot ranges recombine exactly.
EstimateWithError estimate_correlation(bell::CouplerPhase alpha, double theta1, double theta2,
                                       const ShotPlan& plan, std::uint64_t stream_id = 0);

// CHSH combination from four independently sampled correlations; stream ids
// 0..3 cover the settings pairs (a,b), (a',b), (a',b'), (a,b') and the total
// shot budget is split as evenly as possible across them.
EstimateWithError estimate_chsh(bell::CouplerPhase alpha, const bell::AngleSettings& settings,
                                const ShotPlan& plan);

// One estimate per theta (theta1 = 0), stream id = point index.
std::vector<bell::CalibrationPoint> calibration_dataset(bell::CouplerPhase alpha_true,
                                                        std::span<const double> thetas,
                                                        const ShotPlan& plan);

}  // namespace bellsim::sampler
