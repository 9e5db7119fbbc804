#include "bellsim/device.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace bellsim::device {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kClassTol = 1e-6;
constexpr double kReflectionRelTol = 1e-6;

void require(bool condition, const std::string& message) {
    if (!condition) throw std::invalid_argument(message);
}

double effective_mass(const MaterialParams& material) {
    require(std::isfinite(material.effective_mass_ratio) && material.effective_mass_ratio > 0.0 &&
                material.effective_mass_ratio < 10.0,
            "effective mass ratio must lie in (0, 10)");
    return material.effective_mass_ratio * kElectronMassMevFs2PerNm2;
}

std::string format_fixed(double value) {
    std::ostringstream out;
    out.precision(4);
    out << std::fixed << value;
    return out.str();
}

}  // namespace

WavePacket wavepacket_from_energy(double energy_mev, const MaterialParams& material) {
    require(std::isfinite(energy_mev) && energy_mev > 0.0, "energy must be positive");
    const double mass = effective_mass(material);
    WavePacket packet;
    packet.energy_mev = energy_mev;
    packet.wave_vector_per_nm = std::sqrt(2.0 * mass * energy_mev) / kHbarMevFs;
    packet.group_velocity_nm_per_fs = kHbarMevFs * packet.wave_vector_per_nm / mass;
    packet.wavelength_nm = 2.0 * kPi / packet.wave_vector_per_nm;
    return packet;
}

double transfer_length(const WavePacket& packet, double tau_fs) {
    require(std::isfinite(tau_fs) && tau_fs > 0.0, "tunneling period must be positive");
    return packet.group_velocity_nm_per_fs * tau_fs / 2.0;
}

SplitterRotation splitter_rotation(const SplitterSpec& spec, const WavePacket& packet) {
    require(std::isfinite(spec.coupling_length_nm) && spec.coupling_length_nm > 0.0,
            "coupling length must be positive");
    const double lt = transfer_length(packet, spec.tunneling_period_fs);

    SplitterRotation rotation;
    rotation.transfer_fraction = spec.coupling_length_nm / lt;
    rotation.rotation_angle_rad = kPi * rotation.transfer_fraction;
    // Special operating points: chi = 1/2 beam splitter, chi = 1 full
    // transfer, chi = 2 full oscillation back to the input wire.
    if (std::abs(rotation.transfer_fraction - 0.5) <= kClassTol) {
        rotation.classification = SplitterClass::balanced;
    } else if (std::abs(rotation.transfer_fraction - 1.0) <= kClassTol) {
        rotation.classification = SplitterClass::not_gate;
    } else if (std::abs(rotation.transfer_fraction - 2.0) <= kClassTol) {
        rotation.classification = SplitterClass::off;
    } else {
        rotation.classification = SplitterClass::generic;
    }
    return rotation;
}

WellPhase well_phase(const PhaseWellSpec& spec, const WavePacket& packet,
                     const MaterialParams& material) {
    require(std::isfinite(spec.depth_mev), "well depth must be finite");
    require(std::isfinite(spec.width_nm) && spec.width_nm > 0.0, "well width must be positive");
    if (spec.mode == PhaseWellMode::step) {
        require(spec.depth_mev > 0.0 && spec.depth_mev < packet.energy_mev,
                "step height must satisfy 0 < V < E");
    } else {
        require(spec.depth_mev <= 0.0, "well depth must be non-positive");
    }

    const double mass = effective_mass(material);
    WellPhase result;
    result.region_wave_vector_per_nm =
        std::sqrt(2.0 * mass * (packet.energy_mev - spec.depth_mev)) / kHbarMevFs;
    result.phase_rad =
        (result.region_wave_vector_per_nm - packet.wave_vector_per_nm) * spec.width_nm;

    const double half_wavelength = kPi / result.region_wave_vector_per_nm;
    const double n = std::round(spec.width_nm / half_wavelength);
    result.reflection_ok =
        n >= 1.0 && std::abs(spec.width_nm - n * half_wavelength) <= kReflectionRelTol * (n * half_wavelength);
    return result;
}

double ab_phase(const ABLoopSpec& spec) {
    require(std::isfinite(spec.flux_quanta), "flux must be finite");
    return 2.0 * kPi * spec.flux_quanta;
}

SyncCheck check_synchronization(const TimingPlan& plan) {
    require(plan.tolerance_fs > 0.0, "skew tolerance must be positive");
    std::array<double, 2> arrival{};
    for (int q = 0; q < 2; ++q) {
        require(plan.velocity_nm_per_fs[q] > 0.0, "group velocities must be positive");
        arrival[q] = plan.offset_fs[q] + plan.path_nm[q] / plan.velocity_nm_per_fs[q];
    }
    SyncCheck check;
    check.skew_fs = std::abs(arrival[0] - arrival[1]);
    check.ok = check.skew_fs <= plan.tolerance_fs;
    return check;
}

std::string element_kind_name(ElementKind kind) {
    switch (kind) {
        case ElementKind::splitter: return "splitter";
        case ElementKind::well: return "well";
        case ElementKind::ab_loop: return "ab_loop";
        case ElementKind::coupler: return "coupler";
    }
    return "unknown";
}

CompilationReport compile_network(const NetworkSpec& network) {
    CompilationReport report;
    report.wavepacket = wavepacket_from_energy(network.energy_mev, network.material);
    report.ok = true;

    int index = 0;
    for (const auto& spec : network.elements) {
        ++index;
        CompiledElement element;
        element.index = index;
        element.kind = spec.kind;
        element.qubit = spec.qubit;
        try {
            switch (spec.kind) {
                case ElementKind::splitter: {
                    const double lt = transfer_length(report.wavepacket, spec.tau_fs);
                    const double lc = spec.coupling_length_nm.value_or(lt / 2.0);
                    const auto rotation =
                        splitter_rotation({lc, spec.tau_fs}, report.wavepacket);
                    element.geometry_nm = lc;
                    element.angle_rad = rotation.rotation_angle_rad;
                    element.ok = rotation.classification == SplitterClass::balanced;
                    element.note = element.ok
                                       ? "balanced (chi = " + format_fixed(rotation.transfer_fraction) + ")"
                                       : "not a balanced splitter (chi = " +
                                             format_fixed(rotation.transfer_fraction) + ")";
                    break;
                }
                case ElementKind::well: {
                    PhaseWellSpec well{spec.depth_mev, 0.0, spec.mode};
                    if (spec.width_nm.has_value()) {
                        well.width_nm = *spec.width_nm;
                    } else if (spec.halfwaves.has_value()) {
                        const double mass = network.material.effective_mass_ratio *
                                            kElectronMassMevFs2PerNm2;
                        const double k_region =
                            std::sqrt(2.0 * mass * (network.energy_mev - spec.depth_mev)) /
                            kHbarMevFs;
                        well.width_nm = *spec.halfwaves * kPi / k_region;
                    } else {
                        throw std::invalid_argument("well needs width_nm or halfwaves");
                    }
                    const auto phase = well_phase(well, report.wavepacket, network.material);
                    element.geometry_nm = well.width_nm;
                    element.angle_rad = phase.phase_rad;
                    element.ok = phase.reflection_ok;
                    element.note = element.ok
                                       ? "no-reflection width"
                                       : "width " + format_fixed(well.width_nm) +
                                             " nm violates L = n*lambda'/2";
                    break;
                }
                case ElementKind::ab_loop: {
                    element.angle_rad = ab_phase({spec.flux_quanta});
                    element.ok = true;
                    element.note = "flux " + format_fixed(spec.flux_quanta) + " flux quanta";
                    break;
                }
                case ElementKind::coupler: {
                    TimingPlan plan;
                    plan.path_nm = spec.path_nm;
                    plan.offset_fs = spec.offset_fs;
                    plan.velocity_nm_per_fs = {report.wavepacket.group_velocity_nm_per_fs,
                                               report.wavepacket.group_velocity_nm_per_fs};
                    plan.tolerance_fs = network.skew_tolerance_fs;
                    const auto sync = check_synchronization(plan);
                    report.sync = sync;
                    element.angle_rad = spec.alpha_rad;
                    element.ok = sync.ok;
                    element.note = element.ok
                                       ? "synchronized (skew " + format_fixed(sync.skew_fs) + " fs)"
                                       : "skew " + format_fixed(sync.skew_fs) + " fs exceeds tolerance";
                    break;
                }
            }
        } catch (const std::invalid_argument& error) {
            element.ok = false;
            element.note = error.what();
        }

        if (!element.ok && report.ok) {
            report.ok = false;
            report.first_failure = "element " + std::to_string(index) + " (" +
                                   element_kind_name(spec.kind) + ", qubit " +
                                   std::to_string(spec.qubit) + "): " + element.note;
        }
        report.elements.push_back(std::move(element));
    }
    return report;
}

}  // namespace bellsim::device
