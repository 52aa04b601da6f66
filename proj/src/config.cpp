#include "flowparts/config.hpp"

#include <charconv>
#include <ostream>

#include "flowparts/errors.hpp"
#include "flowparts/io_util.hpp"
#include "text_parse.hpp"

namespace flowparts {

void PipelineConfig::validate() const {
  flow.validate();
  mean_shift.validate();
  if (!(eps >= 0.0)) throw ContractError("eps must be >= 0");
  if (!(gate_low >= 0.0 && gate_low < gate_high && gate_high <= 1.0))
    throw ContractError("need 0 <= gate_low < gate_high <= 1");
  if (parts != 1 && parts != 3 && parts != 5 && parts != 7)
    throw ContractError("parts must be one of 1, 3, 5, 7");
  if (!(min_overlap > 0.0 && min_overlap <= 1.0)) throw ContractError("min_overlap out of (0,1]");
  if (jobs < 1) throw ContractError("jobs must be >= 1");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

int to_int(const std::string& key, const std::string& value) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw ValidationError("bad value for '" + key + "': '" + value + "'");
  return out;
}

double to_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw ValidationError("bad value for '" + key + "': '" + value + "'");
  return out;
}

}  // namespace

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::map<std::string, std::string> kv;
  const std::string bytes = read_file(path);
  std::istringstream ss(bytes);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ValidationError(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw ValidationError(path + ":" + std::to_string(line_no) + ": empty key");
    kv[key] = value;  // last value wins
  }
  return kv;
}

void apply_config(PipelineConfig& cfg, const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    if (key == "pyramid_levels") cfg.flow.pyramid_levels = to_int(key, value);
    else if (key == "pyramid_scale") cfg.flow.pyramid_scale = to_double(key, value);
    else if (key == "window_size") cfg.flow.window_size = to_int(key, value);
    else if (key == "iterations") cfg.flow.iterations = to_int(key, value);
    else if (key == "poly_n") cfg.flow.poly_n = to_int(key, value);
    else if (key == "poly_sigma") cfg.flow.poly_sigma = to_double(key, value);
    else if (key == "spatial_bandwidth") cfg.mean_shift.spatial_bandwidth = to_double(key, value);
    else if (key == "range_bandwidth") cfg.mean_shift.range_bandwidth = to_double(key, value);
    else if (key == "max_iterations") cfg.mean_shift.max_iterations = to_int(key, value);
    else if (key == "convergence_tol") cfg.mean_shift.convergence_tol = to_double(key, value);
    else if (key == "merge_radius") cfg.mean_shift.merge_radius = to_double(key, value);
    else if (key == "min_blob_size") cfg.mean_shift.min_blob_size = to_int(key, value);
    else if (key == "eps") cfg.eps = to_double(key, value);
    else if (key == "gate_low") cfg.gate_low = to_double(key, value);
    else if (key == "gate_high") cfg.gate_high = to_double(key, value);
    else if (key == "parts") cfg.parts = to_int(key, value);
    else if (key == "min_overlap") cfg.min_overlap = to_double(key, value);
    else if (key == "jobs") cfg.jobs = to_int(key, value);
    else throw ValidationError("unknown config key '" + key + "'");
  }
}

void print_config(std::ostream& os, const PipelineConfig& cfg) {
  auto put_int = [&](const char* key, int v) { os << key << " = " << v << "\n"; };
  auto put_double = [&](const char* key, double v) {
    std::string s;
    detail::append_double(s, v);
    os << key << " = " << s << "\n";
  };
  put_int("pyramid_levels", cfg.flow.pyramid_levels);
  put_double("pyramid_scale", cfg.flow.pyramid_scale);
  put_int("window_size", cfg.flow.window_size);
  put_int("iterations", cfg.flow.iterations);
  put_int("poly_n", cfg.flow.poly_n);
  put_double("poly_sigma", cfg.flow.poly_sigma);
  put_double("spatial_bandwidth", cfg.mean_shift.spatial_bandwidth);
  put_double("range_bandwidth", cfg.mean_shift.range_bandwidth);
  put_int("max_iterations", cfg.mean_shift.max_iterations);
  put_double("convergence_tol", cfg.mean_shift.convergence_tol);
  put_double("merge_radius", cfg.mean_shift.merge_radius);
  put_int("min_blob_size", cfg.mean_shift.min_blob_size);
  put_double("eps", cfg.eps);
  put_double("gate_low", cfg.gate_low);
  put_double("gate_high", cfg.gate_high);
  put_int("parts", cfg.parts);
  put_double("min_overlap", cfg.min_overlap);
  put_int("jobs", cfg.jobs);
}

}  // namespace flowparts
