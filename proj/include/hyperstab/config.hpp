#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "hyperstab/dynamics.hpp"
#include "hyperstab/tensor.hpp"

namespace hyperstab {

struct LoadedSystem {
    PolySystem system;
    std::string name;
};

/// Parses a system config document:
///   {
///     "name": "optional label",
///     "dim": 2,
///     "tensors": [
///       {"order": 2, "dense": [0.1, 0.1, 0.1, 0.1]},
///       {"order": 3, "fill": 1.0,
///        "entries": [{"idx": [1, 1, 2], "value": 0.5}, ...]}
///     ],
///     "constant": [0.0, 0.0]
///   }
/// Sparse tensors start from `fill` (default 0) with listed exceptions; idx
/// tuples are 1-based. Duplicate idx within one tensor, out-of-range indices,
/// duplicate orders, and schema violations raise InputError with the path to
/// the offending field.
LoadedSystem parse_system_config(const std::string& json_text);
LoadedSystem load_system_config(const std::filesystem::path& path);

/// Emits a config that re-parses to the identical system (dense tensors,
/// round-trip-exact number formatting).
std::string serialize_system_config(const PolySystem& sys, const std::string& name = "");

/// Columns: t, x_1..x_n and V when weights are given. Deterministic
/// byte-for-byte for identical inputs.
std::string trajectory_csv(const Trajectory& traj, const std::optional<Vec>& delta = {});

/// Columns: x0_1..x0_n, label.
std::string region_csv(const RegionSample& sample);

} // namespace hyperstab
