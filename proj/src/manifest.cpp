#include "prism/manifest.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "prism/error.hpp"

namespace prism {

namespace {

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(errc::file_not_found, path.string());

  const std::filesystem::path base = path.parent_path();
  Manifest manifest;
  std::set<std::string> seen;

  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "path,label,prompt_id") {
        raise(errc::parse_error,
              "line 1: expected header 'path,label,prompt_id', got '" + line + "'");
      }
      header_seen = true;
      continue;
    }

    std::vector<std::string> fields = split_csv(line);
    if (fields.size() != 3) {
      raise(errc::parse_error, "line " + std::to_string(line_no) +
                                   ": expected 3 fields, got " +
                                   std::to_string(fields.size()));
    }
    if (fields[0].empty()) {
      raise(errc::parse_error,
            "line " + std::to_string(line_no) + ": empty path");
    }
    if (fields[1].empty()) {
      raise(errc::parse_error,
            "line " + std::to_string(line_no) + ": empty label");
    }

    ManifestEntry entry;
    std::filesystem::path p(fields[0]);
    entry.path = p.is_absolute() ? p : base / p;
    entry.label = fields[1];
    if (!fields[2].empty()) {
      int id = 0;
      std::size_t consumed = 0;
      try {
        id = std::stoi(fields[2], &consumed);
      } catch (const std::exception&) {
        consumed = 0;
      }
      if (consumed != fields[2].size() || id < 1 || id > 40) {
        raise(errc::parse_error, "line " + std::to_string(line_no) +
                                     ": prompt_id must be in [1, 40], got '" +
                                     fields[2] + "'");
      }
      entry.prompt_id = id;
    }

    if (!seen.insert(fields[0]).second) ++manifest.duplicate_path_count;
    manifest.entries.push_back(std::move(entry));
  }

  if (!header_seen || manifest.entries.empty()) {
    raise(errc::empty_manifest, path.string());
  }
  return manifest;
}

void write_manifest(const std::vector<ManifestEntry>& entries,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) raise(errc::io_error, "cannot open for writing: " + path.string());
  out << "path,label,prompt_id\n";
  for (const ManifestEntry& e : entries) {
    out << e.path.string() << ',' << e.label << ',';
    if (e.prompt_id) out << *e.prompt_id;
    out << '\n';
  }
  if (!out) raise(errc::io_error, "failed writing " + path.string());
}

}  // namespace prism
