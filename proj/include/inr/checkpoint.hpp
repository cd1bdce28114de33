#pragma once

#include <filesystem>

#include "inr/recon_model.hpp"

namespace inr {

/// Binary little-endian snapshot of a ReconModel: grid and coil counts, both
/// Fourier feature matrices, then each network's dimensions, w0, seed and
/// float64 parameters. Loading restores the model exactly.
void save_checkpoint(const std::filesystem::path& path, const ReconModel& model);
ReconModel load_checkpoint(const std::filesystem::path& path);

}  // namespace inr
