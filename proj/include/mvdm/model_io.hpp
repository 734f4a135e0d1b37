#pragma once

#include "mvdm/spectral.hpp"
#include "mvdm/types.hpp"

#include <cstdint>
#include <filesystem>

namespace mvdm {

// On-disk model bundle: a directory of CSVs plus a config JSON. Portable
// and diffable; everything the Nystrom extension needs to run later.
struct SavedModel {
    SpectralModel model;
    std::vector<ViewMatrix> train_views;
    std::vector<double> sigmas;
    std::vector<KernelKind> kinds;
    std::string method;
    int t = 1;
    double delta = 0.05;
    std::uint64_t seed = 0;
};

void save_model(const std::filesystem::path& dir, const SavedModel& bundle);
SavedModel load_model(const std::filesystem::path& dir);

} // namespace mvdm
