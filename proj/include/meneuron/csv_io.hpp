#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "meneuron/characterization.hpp"
#include "meneuron/neuron.hpp"
#include "meneuron/telegraph.hpp"

namespace meneuron {

// All writers use shortest round-trip number formatting and throw
// ConfigError when the file cannot be opened. Readers throw ConfigError on
// missing files, unexpected headers or malformed rows.

/// traj_<seed>_<v_me mV>_<v_i mV>.csv with millivolts to three decimals.
std::string trajectory_file_name(std::uint64_t seed, const BiasPoint& bias);

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& t);
void write_dwells_csv(const std::filesystem::path& path, std::span<const DwellRecord> dwells);
void write_lifetime_summary_csv(const std::filesystem::path& path, const BiasPoint& bias,
                                std::span<const LifetimeEstimate> estimates);

void write_grid_csv(const std::filesystem::path& path, const LifetimeGrid& grid);
LifetimeGrid read_grid_csv(const std::filesystem::path& path);

void write_spike_train_csv(const std::filesystem::path& path, const SpikeTrain& train);
void write_waveform_csv(const std::filesystem::path& path, const SpikeTrain& train);
std::vector<DriveSegment> read_drive_csv(const std::filesystem::path& path);
void write_drive_csv(const std::filesystem::path& path, std::span<const DriveSegment> drive);

void write_angles_report(const std::filesystem::path& path, const ContourCalibration& cal);
/// Reads alpha_basis_rad and beta_basis_rad back from an angles report.
BasisAngles read_angles_report(const std::filesystem::path& path);

}  // namespace meneuron
