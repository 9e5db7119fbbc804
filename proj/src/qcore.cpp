#include "bellsim/qcore.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bellsim::qcore {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool condition, const std::string& message) {
    if (!condition) throw std::invalid_argument(message);
}

bool finite(Complex value) { return std::isfinite(value.real()) && std::isfinite(value.imag()); }

void check_unitary(int dim, std::span<const Complex> entries) {
    for (int row = 0; row < dim; ++row) {
        for (int col = 0; col < dim; ++col) {
            Complex dot = 0.0;
            for (int k = 0; k < dim; ++k) {
                dot += std::conj(entries[static_cast<std::size_t>(k * dim + row)]) *
                       entries[static_cast<std::size_t>(k * dim + col)];
            }
            const Complex expected = (row == col) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
            if (std::abs(dot - expected) > kAlgebraTol) {
                throw std::invalid_argument("gate matrix is not unitary within 1e-12");
            }
        }
    }
}

}  // namespace

std::array<double, 3> MeasurementDirection::unit_vector() const noexcept {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

GateMatrix GateMatrix::identity(int dim) {
    require(dim == 2 || dim == 4, "gate dimension must be 2 or 4");
    std::array<Complex, 16> entries{};
    for (int i = 0; i < dim; ++i) entries[static_cast<std::size_t>(i * dim + i)] = 1.0;
    return GateMatrix(dim, entries);
}

GateMatrix GateMatrix::from_entries(int dim, std::span<const Complex> entries) {
    require(dim == 2 || dim == 4, "gate dimension must be 2 or 4");
    require(entries.size() == static_cast<std::size_t>(dim * dim),
            "entry count does not match gate dimension");
    std::array<Complex, 16> data{};
    for (std::size_t i = 0; i < entries.size(); ++i) {
        require(finite(entries[i]), "gate entries must be finite");
        data[i] = entries[i];
    }
    check_unitary(dim, {data.data(), entries.size()});
    return GateMatrix(dim, data);
}

GateMatrix operator*(const GateMatrix& lhs, const GateMatrix& rhs) {
    if (lhs.dim_ != rhs.dim_) throw std::invalid_argument("gate dimension mismatch in product");
    const int dim = lhs.dim_;
    std::array<Complex, 16> entries{};
    for (int row = 0; row < dim; ++row) {
        for (int col = 0; col < dim; ++col) {
            Complex sum = 0.0;
            for (int k = 0; k < dim; ++k) sum += lhs.at(row, k) * rhs.at(k, col);
            entries[static_cast<std::size_t>(row * dim + col)] = sum;
        }
    }
    return GateMatrix(dim, entries);
}

StateVector StateVector::basis(int num_qubits, unsigned basis_index) {
    require(num_qubits == 1 || num_qubits == 2, "state must hold 1 or 2 qubits");
    require(basis_index < (1u << num_qubits), "basis index out of range");
    std::array<Complex, 4> amps{};
    amps[basis_index] = 1.0;
    return StateVector(num_qubits, amps);
}

StateVector StateVector::from_amplitudes(int num_qubits, std::span<const Complex> amplitudes) {
    require(num_qubits == 1 || num_qubits == 2, "state must hold 1 or 2 qubits");
    const std::size_t dim = std::size_t{1} << num_qubits;
    require(amplitudes.size() == dim, "amplitude count must be 2^num_qubits");
    std::array<Complex, 4> amps{};
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        require(finite(amplitudes[i]), "amplitudes must be finite");
        amps[i] = amplitudes[i];
        norm_sq += std::norm(amplitudes[i]);
    }
    require(std::abs(norm_sq - 1.0) <= kAlgebraTol, "state norm must be 1 within 1e-12");
    return StateVector(num_qubits, amps);
}

double StateVector::norm() const noexcept {
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) norm_sq += std::norm(amps_[i]);
    return std::sqrt(norm_sq);
}

Complex overlap(const StateVector& lhs, const StateVector& rhs) {
    if (lhs.num_qubits() != rhs.num_qubits()) {
        throw std::invalid_argument("overlap requires equal qubit counts");
    }
    Complex sum = 0.0;
    for (std::size_t i = 0; i < lhs.dim(); ++i) sum += std::conj(lhs.amp(i)) * rhs.amp(i);
    return sum;
}

bool equal_up_to_global_phase(const StateVector& lhs, const StateVector& rhs, double tol) {
    return std::abs(std::abs(overlap(lhs, rhs)) - 1.0) <= tol;
}

GateMatrix hadamard() {
    const double s = 1.0 / std::sqrt(2.0);
    std::array<Complex, 16> entries{};
    entries[0] = s;
    entries[1] = s;
    entries[2] = s;
    entries[3] = -s;
    return GateMatrix(2, entries);
}

GateMatrix phase_shift(double phi, Rail rail) {
    require(std::isfinite(phi), "phase must be finite");
    const Complex factor = std::polar(1.0, phi);
    std::array<Complex, 16> entries{};
    entries[0] = (rail == Rail::zero) ? factor : Complex{1.0, 0.0};
    entries[3] = (rail == Rail::one) ? factor : Complex{1.0, 0.0};
    return GateMatrix(2, entries);
}

GateMatrix controlled_phase(double phi) {
    require(std::isfinite(phi), "phase must be finite");
    std::array<Complex, 16> entries{};
    entries[0] = 1.0;
    entries[5] = 1.0;
    entries[10] = 1.0;
    entries[15] = std::polar(1.0, phi);
    return GateMatrix(4, entries);
}

GateMatrix measurement_unitary(const MeasurementDirection& dir) {
    require(std::isfinite(dir.theta) && std::isfinite(dir.phi), "direction angles must be finite");
    const GateMatrix h = hadamard();
    // Rightmost factor acts first on states.
    return h * phase_shift(-dir.theta) * h * phase_shift(-dir.phi - kPi / 2.0);
}

StateVector apply_gate(const StateVector& state, const GateMatrix& gate, int target_qubit) {
    require(gate.dim() == 2, "single-qubit application needs a 2x2 gate");
    require(target_qubit >= 1 && target_qubit <= state.num_qubits(),
            "target qubit out of range for state");
    std::array<Complex, 4> amps{};
    for (std::size_t i = 0; i < state.dim(); ++i) amps[i] = state.amp(i);

    // Qubit 1 is the left bit of the basis index.
    const int bit = state.num_qubits() - target_qubit;
    const std::size_t mask = std::size_t{1} << bit;
    for (std::size_t base = 0; base < state.dim(); ++base) {
        if ((base & mask) != 0) continue;
        const Complex a0 = amps[base];
        const Complex a1 = amps[base | mask];
        amps[base] = gate.at(0, 0) * a0 + gate.at(0, 1) * a1;
        amps[base | mask] = gate.at(1, 0) * a0 + gate.at(1, 1) * a1;
    }
    return StateVector(state.num_qubits(), amps);
}

StateVector apply_gate(const StateVector& state, const GateMatrix& gate,
                       std::pair<int, int> target_qubits) {
    require(gate.dim() == 4, "two-qubit application needs a 4x4 gate");
    require(state.num_qubits() == 2, "two-qubit gate needs a two-qubit state");
    const auto [first, second] = target_qubits;
    require((first == 1 && second == 2) || (first == 2 && second == 1),
            "two-qubit targets must be an ordering of qubits 1 and 2");

    const bool swapped = (first == 2);
    auto relabel = [swapped](std::size_t index) {
        return swapped ? ((index >> 1) | ((index & 1) << 1)) : index;
    };

    std::array<Complex, 4> out{};
    for (std::size_t row = 0; row < 4; ++row) {
        Complex sum = 0.0;
        for (std::size_t col = 0; col < 4; ++col) {
            sum += gate.at(static_cast<int>(relabel(row)), static_cast<int>(relabel(col))) *
                   state.amp(col);
        }
        out[row] = sum;
    }
    return StateVector(2, out);
}

double sigma_z_pair(const StateVector& state) {
    if (state.num_qubits() != 2) {
        throw std::invalid_argument("sigma_z pair expectation needs a two-qubit state");
    }
    double value = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const int parity = ((i >> 1) ^ (i & 1)) & 1;
        value += (parity != 0 ? -1.0 : 1.0) * std::norm(state.amp(i));
    }
    return value;
}

double expectation_pair(const StateVector& state, const MeasurementDirection& a,
                        const MeasurementDirection& b) {
    if (state.num_qubits() != 2) {
        throw std::invalid_argument("pair expectation needs a two-qubit state");
    }
    StateVector rotated = apply_gate(state, measurement_unitary(a), 1);
    rotated = apply_gate(rotated, measurement_unitary(b), 2);
    return sigma_z_pair(rotated);
}

std::array<double, 4> outcome_cdf(const StateVector& state) {
    std::array<double, 4> cdf{1.0, 1.0, 1.0, 1.0};
    double running = 0.0;
    const std::size_t dim = state.dim();
    for (std::size_t i = 0; i + 1 < dim; ++i) {
        running += std::norm(state.amp(i));
        cdf[i] = std::min(running, 1.0);
    }
    for (std::size_t i = dim - 1; i < 4; ++i) cdf[i] = 1.0;
    return cdf;
}

unsigned sample_outcome(const StateVector& state, rng::Stream& stream) {
    const auto cdf = outcome_cdf(state);
    const double u = stream.next_uniform();
    for (unsigned bin = 0; bin < 3; ++bin) {
        if (u < cdf[bin]) return bin;
    }
    return 3;
}

}  // namespace bellsim::qcore
