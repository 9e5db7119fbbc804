#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "bellsim/device.hpp"

namespace bellsim::device {

class ConfigError : public std::runtime_error {
  public:
    ConfigError(int line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

    int line() const noexcept { return line_; }

  private:
    int line_;
};

// Flat key-value format, one [section] per physical element in circuit order:
//
//   [device]                  # required header
//   effective_mass_ratio = 0.067
//   energy_mev = 10.0
//   skew_tolerance_fs = 1.0   # optional, default 1.0
//
//   [splitter]  qubit, tau_fs, optional coupling_length_nm (default L_t/2)
//   [well]      qubit, depth_mev, mode (well|step, default well),
//               width_nm or halfwaves
//   [ab]        qubit, flux
//   [coupler]   alpha, optional path1_nm/path2_nm/offset1_fs/offset2_fs
//
// Angle-valued fields (alpha) accept pi literals. '#' starts a comment.
NetworkSpec parse_network_config(const std::string& text);

NetworkSpec load_network_config(const std::filesystem::path& path);

}  // namespace bellsim::device
