#pragma once

// Run manifests: the effective configuration, wall clock, per-output FNV-1a
// checksums and the pass/fail record of every configured assertion. Re-running
// with an identical configuration must reproduce identical output checksums.

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "isogeo/csv.hpp"
#include "isogeo/errors.hpp"
#include "isogeo/version.hpp"

namespace isogeo {

inline std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("fnv1a64_file: cannot open " + path);
  std::uint64_t hash = 0xcbf29ce484222325ull;
  char buffer[1 << 14];
  while (in) {
    in.read(buffer, sizeof(buffer));
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buffer[i]);
      hash *= 0x100000001b3ull;
    }
  }
  return hash;
}

struct CriterionResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct OutputRecord {
  std::string filename;  // relative to the run directory
  std::uint64_t checksum = 0;
  std::uint64_t bytes = 0;
};

struct RunManifest {
  std::map<std::string, std::string> config;  // effective key=value echo
  std::string experiment;
  double wall_clock_seconds = 0.0;
  std::vector<OutputRecord> outputs;
  std::vector<CriterionResult> criteria;
  bool pass = true;
};

inline std::string manifest_path(const std::string& run_dir) {
  return run_dir + "/run_manifest.txt";
}

inline void write_manifest(const std::string& run_dir, const RunManifest& manifest) {
  std::ofstream out(manifest_path(run_dir), std::ios::trunc);
  if (!out) throw config_error("write_manifest: cannot open " + manifest_path(run_dir));
  out << "isogeo_manifest = 1\n";
  out << "toolkit_version = " << kVersion << "\n";
  out << "experiment = " << manifest.experiment << "\n";
  for (const auto& [key, value] : manifest.config) {
    out << "config." << key << " = " << value << "\n";
  }
  out << "wall_clock_seconds = " << format_double(manifest.wall_clock_seconds) << "\n";
  for (const auto& record : manifest.outputs) {
    char checksum[32];
    std::snprintf(checksum, sizeof(checksum), "%016llx",
                  static_cast<unsigned long long>(record.checksum));
    out << "output = " << record.filename << " fnv1a64=" << checksum
        << " bytes=" << record.bytes << "\n";
  }
  for (const auto& criterion : manifest.criteria) {
    out << "criterion = " << criterion.name << " "
        << (criterion.pass ? "pass" : "FAIL") << " " << criterion.detail << "\n";
  }
  out << "status = " << (manifest.pass ? "pass" : "fail") << "\n";
}

// Minimal parse for report emission; only the line classes written above.
inline RunManifest read_manifest(const std::string& run_dir) {
  std::ifstream in(manifest_path(run_dir));
  if (!in) throw config_error("read_manifest: no manifest in " + run_dir);
  RunManifest manifest;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 3);
    if (key == "experiment") {
      manifest.experiment = value;
    } else if (key == "status") {
      manifest.pass = value == "pass";
    } else if (key == "wall_clock_seconds") {
      manifest.wall_clock_seconds = std::stod(value);
    } else if (key.rfind("config.", 0) == 0) {
      manifest.config[key.substr(7)] = value;
    } else if (key == "output") {
      OutputRecord record;
      std::istringstream fields(value);
      std::string token;
      fields >> record.filename;
      while (fields >> token) {
        if (token.rfind("fnv1a64=", 0) == 0) {
          record.checksum = std::stoull(token.substr(8), nullptr, 16);
        } else if (token.rfind("bytes=", 0) == 0) {
          record.bytes = std::stoull(token.substr(6));
        }
      }
      manifest.outputs.push_back(record);
    } else if (key == "criterion") {
      std::istringstream fields(value);
      CriterionResult criterion;
      std::string verdict;
      fields >> criterion.name >> verdict;
      std::getline(fields, criterion.detail);
      if (!criterion.detail.empty() && criterion.detail.front() == ' ') {
        criterion.detail.erase(0, 1);
      }
      criterion.pass = verdict == "pass";
      manifest.criteria.push_back(criterion);
    }
  }
  return manifest;
}

}  // namespace isogeo
