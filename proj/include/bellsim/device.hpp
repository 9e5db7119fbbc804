#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace bellsim::device {

// Unit system: nm / fs / meV. Electron mass from CODATA, expressed in these
// units (m_e c^2 = 510998.95 meV, c = 299.792458 nm/fs).
inline constexpr double kHbarMevFs = 658.2119569;
inline constexpr double kElectronMassMevFs2PerNm2 = 5685.630;

struct MaterialParams {
    double effective_mass_ratio = 1.0;  // m*/m_e, must lie in (0, 10)
};

struct WavePacket {
    double energy_mev = 0.0;
    double wave_vector_per_nm = 0.0;   // sqrt(2 m* E) / hbar
    double group_velocity_nm_per_fs = 0.0;  // hbar k / m*
    double wavelength_nm = 0.0;        // 2 pi / k
};

struct SplitterSpec {
    double coupling_length_nm = 0.0;
    double tunneling_period_fs = 0.0;
};

enum class SplitterClass { balanced, not_gate, off, generic };

struct SplitterRotation {
    double transfer_fraction = 0.0;  // chi = L_c / L_t
    double rotation_angle_rad = 0.0;  // pi * chi; population transfer sin^2(angle/2)
    SplitterClass classification = SplitterClass::generic;
};

enum class PhaseWellMode { well, step };

struct PhaseWellSpec {
    double depth_mev = 0.0;  // negative for a well, 0 < V < E for a step
    double width_nm = 0.0;
    PhaseWellMode mode = PhaseWellMode::well;
};

struct WellPhase {
    double phase_rad = 0.0;            // (k' - k) * L
    double region_wave_vector_per_nm = 0.0;
    bool reflection_ok = false;        // L = n * lambda'/2 within 1e-6 relative
};

struct ABLoopSpec {
    double flux_quanta = 0.0;  // Phi / Phi_0
};

struct TimingPlan {
    std::array<double, 2> path_nm{};
    std::array<double, 2> offset_fs{};
    std::array<double, 2> velocity_nm_per_fs{};
    double tolerance_fs = 1.0;
};

struct SyncCheck {
    double skew_fs = 0.0;
    bool ok = false;
};

WavePacket wavepacket_from_energy(double energy_mev, const MaterialParams& material);

// L_t = v * tau / 2, the length for complete inter-wire transfer.
double transfer_length(const WavePacket& packet, double tau_fs);

SplitterRotation splitter_rotation(const SplitterSpec& spec, const WavePacket& packet);

WellPhase well_phase(const PhaseWellSpec& spec, const WavePacket& packet,
                     const MaterialParams& material);

// Aharonov-Bohm phase 2 pi Phi/Phi_0, applied on the 0-rail shifter.
double ab_phase(const ABLoopSpec& spec);

SyncCheck check_synchronization(const TimingPlan& plan);

// --- network compilation ------------------------------------------------

enum class ElementKind { splitter, well, ab_loop, coupler };

std::string element_kind_name(ElementKind kind);

// One physical element realizing one logical gate, in circuit order.
struct ElementSpec {
    ElementKind kind = ElementKind::splitter;
    int qubit = 1;  // 1 or 2; couplers act on both

    // splitter (Hadamard realization)
    double tau_fs = 0.0;
    std::optional<double> coupling_length_nm;  // default: L_t / 2

    // well / step phase shifter
    double depth_mev = 0.0;
    PhaseWellMode mode = PhaseWellMode::well;
    std::optional<double> width_nm;   // checked against the no-reflection rule
    std::optional<int> halfwaves;     // or synthesized as n * lambda'/2

    // AB loop
    double flux_quanta = 0.0;

    // Coulomb coupler
    double alpha_rad = 0.0;
    std::array<double, 2> path_nm{};
    std::array<double, 2> offset_fs{};

    int config_line = 0;  // provenance for diagnostics
};

struct NetworkSpec {
    MaterialParams material{};
    double energy_mev = 0.0;
    double skew_tolerance_fs = 1.0;
    std::vector<ElementSpec> elements;
};

struct CompiledElement {
    int index = 0;
    ElementKind kind = ElementKind::splitter;
    int qubit = 1;
    std::optional<double> geometry_nm;  // L_c, L, or none for AB/coupler
    double angle_rad = 0.0;             // rotation angle, phase, or alpha
    bool ok = false;
    std::string note;
};

struct CompilationReport {
    WavePacket wavepacket{};
    std::vector<CompiledElement> elements;
    std::optional<SyncCheck> sync;  // present when the network has a coupler
    bool ok = false;
    std::string first_failure;  // names the failing element
};

// Compiles every element in order, evaluating the feasibility verdicts
// (balanced splitter, no-reflection width, synchronization). Fails closed:
// report.ok is false and first_failure names the element on any failure.
CompilationReport compile_network(const NetworkSpec& network);

}  // namespace bellsim::device
