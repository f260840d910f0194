#pragma once

#include <string>
#include <vector>

#include "ornlab/routing.hpp"
#include "ornlab/schedule.hpp"
#include "ornlab/tradeoff.hpp"

namespace ornlab::io {

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// FNV-1a 64-bit hex digest; used to stamp outputs with their config.
std::string fnv1a_hex(const std::string& text);

/// CSV columns: tail_index, timestep_k, head_index, load_num, load_den.
/// A single leading comment line carries {version, digest, seed}.
std::string loadmap_to_csv(const LoadMap& load, const Schedule& s, const std::string& meta);

/// JSON form: {meta, N, T, edges: [{tail, k, head, num, den}, ...]}.
std::string loadmap_to_json(const LoadMap& load, const Schedule& s, const std::string& meta);

std::string curves_to_csv(const std::vector<CurvePoint>& points, const std::string& meta);

/// Demand permutation from a JSON array.
Permutation demand_from_json(const std::string& text);

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace ornlab::io
