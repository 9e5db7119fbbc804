#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <utility>

#include "bellsim/rng.hpp"

namespace bellsim::qcore {

using Complex = std::complex<double>;

// Which wire of a dual-rail qubit a phase shifter sits on.
enum class Rail { zero, one };

// Tolerance ladder: exact algebra / composed gate networks / optimizer output.
inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kNetworkTol = 1e-10;
inline constexpr double kOptimizerTol = 1e-6;

// Analyzer axis n = (sin theta cos phi, sin theta sin phi, cos theta).
struct MeasurementDirection {
    double theta = 0.0;
    double phi = 0.0;

    std::array<double, 3> unit_vector() const noexcept;
};

// Dense 2x2 or 4x4 unitary, row-major.
class GateMatrix {
  public:
    static GateMatrix identity(int dim);
    // Validates unitarity (M^dagger M = 1 within 1e-12 entrywise).
    static GateMatrix from_entries(int dim, std::span<const Complex> entries);

    int dim() const noexcept { return dim_; }
    Complex at(int row, int col) const noexcept { return entries_[static_cast<std::size_t>(row * dim_ + col)]; }
    std::span<const Complex> entries() const noexcept {
        return {entries_.data(), static_cast<std::size_t>(dim_ * dim_)};
    }

    friend GateMatrix operator*(const GateMatrix& lhs, const GateMatrix& rhs);

  private:
    GateMatrix(int dim, std::array<Complex, 16> entries) : dim_(dim), entries_(entries) {}

    int dim_;
    std::array<Complex, 16> entries_{};

    friend GateMatrix hadamard();
    friend GateMatrix phase_shift(double, Rail);
    friend GateMatrix controlled_phase(double);
};

// Amplitudes of one or two dual-rail qubits. Basis order |0>,|1> for one
// qubit and |00>,|01>,|10>,|11> for two, with qubit 1 as the left bit.
class StateVector {
  public:
    static StateVector basis(int num_qubits, unsigned basis_index);
    // Validates length, finiteness and unit norm (within 1e-12).
    static StateVector from_amplitudes(int num_qubits, std::span<const Complex> amplitudes);

    int num_qubits() const noexcept { return num_qubits_; }
    std::size_t dim() const noexcept { return std::size_t{1} << num_qubits_; }
    Complex amp(std::size_t index) const noexcept { return amps_[index]; }
    std::span<const Complex> amps() const noexcept { return {amps_.data(), dim()}; }
    double norm() const noexcept;

  private:
    StateVector(int num_qubits, std::array<Complex, 4> amps)
        : num_qubits_(num_qubits), amps_(amps) {}

    int num_qubits_;
    std::array<Complex, 4> amps_{};

    friend StateVector apply_gate(const StateVector&, const GateMatrix&, int);
    friend StateVector apply_gate(const StateVector&, const GateMatrix&, std::pair<int, int>);
};

Complex overlap(const StateVector& lhs, const StateVector& rhs);

// Global phases are physical no-ops here: equality means |<a|b>| = 1.
bool equal_up_to_global_phase(const StateVector& lhs, const StateVector& rhs,
                              double tol = kAlgebraTol);

GateMatrix hadamard();
// rail one -> diag(1, e^{i phi}); rail zero -> diag(e^{i phi}, 1).
GateMatrix phase_shift(double phi, Rail rail = Rail::one);
// diag(1, 1, 1, e^{i phi}).
GateMatrix controlled_phase(double phi);
// U(theta, phi) = H P(-theta) H P(-phi - pi/2); satisfies U^dagger sigma_z U = sigma_n.
GateMatrix measurement_unitary(const MeasurementDirection& dir);

// Applies a 2x2 gate to the given qubit (1 = left bit).
StateVector apply_gate(const StateVector& state, const GateMatrix& gate, int target_qubit);
// Applies a 4x4 gate; targets may be (1,2) or (2,1).
StateVector apply_gate(const StateVector& state, const GateMatrix& gate,
                       std::pair<int, int> target_qubits);

// <sigma_z x sigma_z> of a two-qubit state.
double sigma_z_pair(const StateVector& state);

// <sigma_a x sigma_b>: rotates each qubit with its measurement unitary, then
// evaluates the joint sigma_z parity.
double expectation_pair(const StateVector& state, const MeasurementDirection& a,
                        const MeasurementDirection& b);

// Born-rule probabilities as an ascending CDF padded to four bins; the last
// reachable bin absorbs rounding so the final entry is exactly 1.
std::array<double, 4> outcome_cdf(const StateVector& state);

// Basis-state index drawn from |amp|^2; deterministic given the stream.
unsigned sample_outcome(const StateVector& state, rng::Stream& stream);

}  // namespace bellsim::qcore
