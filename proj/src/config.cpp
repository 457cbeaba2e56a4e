#include "bstar/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "bstar/errors.hpp"

namespace bstar {
namespace {

struct Field {
  std::function<void(RunConfig&, const std::string&)> set;  // throws std::invalid_argument on bad text
  std::function<std::string(const RunConfig&)> get;
};

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double to_double(const std::string& s) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw std::invalid_argument("expected a number");
  return v;
}

template <class Int>
Int to_int(const std::string& s) {
  Int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw std::invalid_argument("expected an integer");
  return v;
}

long long to_signed(const std::string& s) { return to_int<long long>(s); }

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> table = {
      {"grid.n",
       {[](RunConfig& c, const std::string& v) {
          const long long x = to_signed(v);
          if (x <= 0) throw Error(ErrorCode::ValidationError, "grid.n must be a positive integer, got " + v);
          c.grid.n = static_cast<std::size_t>(x);
        },
        [](const RunConfig& c) { return std::to_string(c.grid.n); }}},
      {"grid.r_max", {[](RunConfig& c, const std::string& v) { c.grid.r_max = to_double(v); },
                      [](const RunConfig& c) { return fmt_double(c.grid.r_max); }}},
      {"tgrid.m",
       {[](RunConfig& c, const std::string& v) {
          const long long x = to_signed(v);
          if (x < 0) throw Error(ErrorCode::ValidationError, "tgrid.m must be >= 0, got " + v);
          c.tgrid.m = static_cast<std::size_t>(x);
        },
        [](const RunConfig& c) { return std::to_string(c.tgrid.m); }}},
      {"tgrid.t_max", {[](RunConfig& c, const std::string& v) { c.tgrid.t_max = to_double(v); },
                       [](const RunConfig& c) { return fmt_double(c.tgrid.t_max); }}},
      {"solver.init", {[](RunConfig& c, const std::string& v) { c.solver.init = v; },
                       [](const RunConfig& c) { return c.solver.init; }}},
      {"solver.init_param", {[](RunConfig& c, const std::string& v) { c.solver.init_param = to_double(v); },
                             [](const RunConfig& c) { return fmt_double(c.solver.init_param); }}},
      {"solver.tol", {[](RunConfig& c, const std::string& v) { c.solver.tol = to_double(v); },
                      [](const RunConfig& c) { return fmt_double(c.solver.tol); }}},
      {"solver.max_iter", {[](RunConfig& c, const std::string& v) { c.solver.max_iter = to_int<int>(v); },
                           [](const RunConfig& c) { return std::to_string(c.solver.max_iter); }}},
      {"solver.relaxation", {[](RunConfig& c, const std::string& v) { c.solver.relaxation = to_double(v); },
                             [](const RunConfig& c) { return fmt_double(c.solver.relaxation); }}},
      {"solver.seed", {[](RunConfig& c, const std::string& v) { c.solver.seed = to_int<std::uint64_t>(v); },
                       [](const RunConfig& c) { return std::to_string(c.solver.seed); }}},
      {"linearization.l_max", {[](RunConfig& c, const std::string& v) { c.linearization.l_max = to_int<int>(v); },
                               [](const RunConfig& c) { return std::to_string(c.linearization.l_max); }}},
      {"linearization.k_eigs", {[](RunConfig& c, const std::string& v) { c.linearization.k_eigs = to_int<int>(v); },
                                [](const RunConfig& c) { return std::to_string(c.linearization.k_eigs); }}},
      {"extension.basis_size", {[](RunConfig& c, const std::string& v) { c.extension.basis_size = to_int<int>(v); },
                                [](const RunConfig& c) { return std::to_string(c.extension.basis_size); }}},
      {"output.directory", {[](RunConfig& c, const std::string& v) { c.output.directory = v; },
                            [](const RunConfig& c) { return c.output.directory; }}},
      {"output.formats", {[](RunConfig& c, const std::string& v) { c.output.formats = v; },
                          [](const RunConfig& c) { return c.output.formats; }}},
  };
  return table;
}

std::string trim(const std::string& s, std::size_t& lead) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  lead = b;
  return s.substr(b, e - b);
}

[[noreturn]] void parse_fail(int line, std::size_t col, const std::string& msg) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::size_t hash = raw.find('#');
    const std::string body = hash == std::string::npos ? raw : raw.substr(0, hash);
    std::size_t lead = 0;
    const std::string line = trim(body, lead);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) parse_fail(line_no, lead + 1, "expected 'key = value'");
    std::size_t klead = 0, vlead = 0;
    const std::string key = trim(line.substr(0, eq), klead);
    std::string value = trim(line.substr(eq + 1), vlead);
    const std::size_t vcol = lead + eq + 2 + vlead;
    if (key.empty()) parse_fail(line_no, lead + 1, "missing key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (value.empty()) parse_fail(line_no, vcol, "missing value for " + key);
    const auto it = fields().find(key);
    if (it == fields().end()) throw Error(ErrorCode::ValidationError, "unknown key " + key + " (line " + std::to_string(line_no) + ")");
    try {
      it->second.set(cfg, value);
    } catch (const std::invalid_argument& e) {
      parse_fail(line_no, vcol, std::string(e.what()) + " for " + key + ", got '" + value + "'");
    }
  }
  validate(cfg);
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot open config " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

void validate(const RunConfig& c) {
  auto bad = [](const std::string& field, const std::string& bound) {
    throw Error(ErrorCode::ValidationError, field + " must be " + bound);
  };
  if (c.grid.n < 8 || c.grid.n > 65536) bad("grid.n", "in [8, 65536]");
  if (!(c.grid.r_max > 0.0) || !(c.grid.r_max <= 1e6)) bad("grid.r_max", "in (0, 1e6]");
  if (c.tgrid.m == 1 || c.tgrid.m > 65536) bad("tgrid.m", "0 (derived) or in [2, 65536]");
  if (!(c.tgrid.t_max >= 0.0) || !(c.tgrid.t_max <= 1e6)) bad("tgrid.t_max", "0 (derived) or in (0, 1e6]");
  if (c.effective_m() < 2) bad("tgrid.m", "at least 2 after derivation");
  if (c.solver.init != "gaussian" && c.solver.init != "exponential" && c.solver.init != "ball")
    bad("solver.init", "one of gaussian, exponential, ball");
  if (!(c.solver.init_param > 0.0)) bad("solver.init_param", "> 0");
  if (!(c.solver.tol > 0.0) || !(c.solver.tol < 1.0)) bad("solver.tol", "in (0, 1)");
  if (c.solver.max_iter < 1) bad("solver.max_iter", ">= 1");
  if (!(c.solver.relaxation > 0.0) || !(c.solver.relaxation <= 1.0)) bad("solver.relaxation", "in (0, 1]");
  if (c.linearization.l_max < 0 || c.linearization.l_max > 8) bad("linearization.l_max", "in [0, 8]");
  if (c.linearization.k_eigs < 1 || c.linearization.k_eigs > 50 ||
      static_cast<std::size_t>(c.linearization.k_eigs) > c.grid.n / 2)
    bad("linearization.k_eigs", "in [1, min(50, n/2)]");
  if (c.extension.basis_size < 1 || c.extension.basis_size > 256) bad("extension.basis_size", "in [1, 256]");
  if (c.output.directory.empty()) bad("output.directory", "non-empty");
  std::istringstream fs(c.output.formats);
  std::string tok;
  while (std::getline(fs, tok, ','))
    if (tok != "csv" && tok != "json") bad("output.formats", "a comma list drawn from csv, json");
}

std::string serialize(const RunConfig& cfg) {
  std::string out;
  for (const auto& [key, f] : fields()) out += key + " = " + f.get(cfg) + "\n";
  return out;
}

std::string computation_text(const RunConfig& cfg) {
  std::string out;
  for (const auto& [key, f] : fields())
    if (key.rfind("output.", 0) != 0) out += key + " = " + f.get(cfg) + "\n";
  return out;
}

std::string config_hash(const RunConfig& cfg) { return text_hash(computation_text(cfg)); }

std::string text_hash(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace bstar
