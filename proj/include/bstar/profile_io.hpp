#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bstar {

inline constexpr const char* kToolVersion = "bstar 1.0.0";

struct ProfileMetadata {
  std::string kind = "ground_state";
  std::size_t n = 0;
  double r_max = 0.0;
  double eigenvalue = 0.0;
  double mass = 0.0;
  double residual = 0.0;
  std::string tool_version = kToolVersion;
  std::string config_hash;
  // Canonical text of the producing configuration; its hash must equal
  // config_hash.
  std::string config_text;
};

struct ProfileRecord {
  ProfileMetadata meta;
  Eigen::VectorXd r;
  Eigen::VectorXd values;
};

// Writes `path` (CSV, header "r,value") and the JSON sidecar next to it
// (same stem, .json). Values are printed with 17 significant digits, which
// reads back to the identical double.
void save_profile(const ProfileRecord& rec, const std::string& path);

struct LoadedProfile {
  ProfileRecord record;
  bool hash_mismatch = false;
  std::string warning;
};

// Throws FormatError on a bad header, a malformed row or a row count that
// disagrees with the sidecar. A config_hash that does not match the stored
// config text (or `expected_hash`, when given) is reported as a warning.
LoadedProfile load_profile(const std::string& path, const std::optional<std::string>& expected_hash = {});

std::string sidecar_path(const std::string& csv_path);

// Plain CSV with a header row; every column has the same length.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<Eigen::VectorXd>& columns);

void write_text(const std::string& path, const std::string& text);

std::string format_double(double x);

}  // namespace bstar
