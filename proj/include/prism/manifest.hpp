#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace prism {

struct ManifestEntry {
  std::filesystem::path path;
  std::string label;
  std::optional<int> prompt_id;  // in [1, 40] when present
};

struct Manifest {
  std::vector<ManifestEntry> entries;  // in file order
  int duplicate_path_count = 0;        // duplicates are allowed but counted
};

/// Parses a manifest CSV with the mandatory header `path,label,prompt_id`.
/// Relative image paths are resolved against the manifest's directory.
Manifest read_manifest(const std::filesystem::path& path);

/// Writes entries back out in the same CSV format (fixture support).
void write_manifest(const std::vector<ManifestEntry>& entries,
                    const std::filesystem::path& path);

}  // namespace prism
