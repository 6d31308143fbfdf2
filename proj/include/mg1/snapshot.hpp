#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mg1/bayes_matrix.hpp"
#include "mg1/bayes_rate.hpp"

namespace mg1 {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Both posteriors plus where they came from. Text form is one `key=value`
/// per line; lines starting with '#' are comments.
struct PosteriorSnapshot {
  GammaPosterior gamma;
  DeltaDirichletPosterior dp;
  std::string source_digest;
  std::string tool_version{kToolVersion};

  bool operator==(const PosteriorSnapshot&) const = default;
};

std::string serialize(const PosteriorSnapshot& snapshot);
/// Throws CorruptData on unknown keys, missing keys, or inconsistent counts.
PosteriorSnapshot parse_snapshot(std::string_view text);

PosteriorSnapshot load_snapshot(const std::filesystem::path& path);
void save_snapshot(const std::filesystem::path& path, const PosteriorSnapshot& snapshot);

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomically(const std::filesystem::path& path, std::string_view content);

}  // namespace mg1
