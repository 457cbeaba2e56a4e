#include "bstar/profile_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bstar/config.hpp"
#include "bstar/errors.hpp"

namespace bstar {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string sidecar_path(const std::string& csv_path) {
  const std::string ext = ".csv";
  if (csv_path.size() >= ext.size() && csv_path.compare(csv_path.size() - ext.size(), ext.size(), ext) == 0)
    return csv_path.substr(0, csv_path.size() - ext.size()) + ".json";
  return csv_path + ".json";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + path);
  f << text;
  if (!f) throw Error(ErrorCode::IoError, "write failed for " + path);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<Eigen::VectorXd>& columns) {
  if (header.size() != columns.size()) throw Error(ErrorCode::FormatError, "header/column count mismatch");
  std::string out;
  for (std::size_t c = 0; c < header.size(); ++c) out += (c ? "," : "") + header[c];
  out += "\n";
  const Eigen::Index rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& col : columns)
    if (col.size() != rows) throw Error(ErrorCode::FormatError, "ragged columns for " + path);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ',';
      out += format_double(columns[c][i]);
    }
    out += '\n';
  }
  write_text(path, out);
}

void save_profile(const ProfileRecord& rec, const std::string& path) {
  if (rec.r.size() != rec.values.size()) throw Error(ErrorCode::FormatError, "r and value lengths differ");
  write_csv(path, {"r", "value"}, {rec.r, rec.values});
  nlohmann::json j;
  j["kind"] = rec.meta.kind;
  j["n"] = rec.values.size();
  j["r_max"] = rec.meta.r_max;
  j["eigenvalue"] = rec.meta.eigenvalue;
  j["mass"] = rec.meta.mass;
  j["residual"] = rec.meta.residual;
  j["tool_version"] = rec.meta.tool_version;
  j["config_hash"] = rec.meta.config_hash;
  j["config"] = rec.meta.config_text;
  write_text(sidecar_path(path), j.dump(2) + "\n");
}

LoadedProfile load_profile(const std::string& path, const std::optional<std::string>& expected_hash) {
  LoadedProfile out;
  ProfileMetadata& m = out.record.meta;
  {
    std::ifstream js(sidecar_path(path), std::ios::binary);
    if (!js) throw Error(ErrorCode::FormatError, "missing metadata sidecar for " + path);
    try {
      const nlohmann::json j = nlohmann::json::parse(js);
      m.kind = j.at("kind").get<std::string>();
      m.n = j.at("n").get<std::size_t>();
      m.r_max = j.at("r_max").get<double>();
      m.eigenvalue = j.at("eigenvalue").get<double>();
      m.mass = j.at("mass").get<double>();
      m.residual = j.at("residual").get<double>();
      m.tool_version = j.at("tool_version").get<std::string>();
      m.config_hash = j.at("config_hash").get<std::string>();
      m.config_text = j.value("config", std::string());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::FormatError, "bad metadata for " + path + ": " + e.what());
    }
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::FormatError, "cannot open " + path);
  std::string line;
  if (!std::getline(f, line) || line != "r,value") throw Error(ErrorCode::FormatError, "expected header 'r,value' in " + path);
  std::vector<double> r, v;
  int row = 1;
  while (std::getline(f, line)) {
    ++row;
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::FormatError, "row " + std::to_string(row) + " has one column");
    char* end = nullptr;
    const double a = std::strtod(line.c_str(), &end);
    if (end != line.c_str() + comma) throw Error(ErrorCode::FormatError, "bad r at row " + std::to_string(row));
    const char* vs = line.c_str() + comma + 1;
    const double b = std::strtod(vs, &end);
    if (end == vs || *end != '\0') throw Error(ErrorCode::FormatError, "bad value at row " + std::to_string(row));
    r.push_back(a);
    v.push_back(b);
  }
  if (v.size() != m.n)
    throw Error(ErrorCode::FormatError, "expected " + std::to_string(m.n) + " rows, found " + std::to_string(v.size()));
  out.record.r = Eigen::Map<Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size()));
  out.record.values = Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));

  if (!m.config_text.empty() && text_hash(m.config_text) != m.config_hash) {
    out.hash_mismatch = true;
    out.warning = "HashMismatch: config_hash does not match the stored configuration";
  } else if (expected_hash && *expected_hash != m.config_hash) {
    out.hash_mismatch = true;
    out.warning = "HashMismatch: profile was produced by config " + m.config_hash + ", expected " + *expected_hash;
  }
  return out;
}

}  // namespace bstar
