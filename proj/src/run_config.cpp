#include "levy_transport/run_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace levy_transport {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += format_double(values[i]);
  }
  return out;
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) continue;
    out.push_back(std::stod(t));
  }
  return out;
}

void RunConfig::validate() const {
  noise().validate();
  grid().validate();
  if (n_samples < 2) throw std::invalid_argument("RunConfig: n_samples must be >= 2");
  if (series_stride < 1) throw std::invalid_argument("RunConfig: series_stride must be >= 1");
  if (!(fit_lo > 0.0 && fit_hi > fit_lo))
    throw std::invalid_argument("RunConfig: need 0 < fit_lo < fit_hi");
  if (fit_mode != "free" && fit_mode != "fixed")
    throw std::invalid_argument("RunConfig: fit_mode must be 'free' or 'fixed'");
  if (!(pde_pad >= 0.0)) throw std::invalid_argument("RunConfig: pde_pad must be >= 0");
  if (!(pde_safety > 0.0 && pde_safety <= 1.0))
    throw std::invalid_argument("RunConfig: pde_safety must lie in (0,1]");
  if (!(compare_allowance_frac > 0.0))
    throw std::invalid_argument("RunConfig: compare_allowance_frac must be > 0");
  if (replicates < 0) throw std::invalid_argument("RunConfig: replicates must be >= 0");
  if (max_rejects < 1) throw std::invalid_argument("RunConfig: max_rejects must be >= 1");
  const SpaceTimeGrid g = grid();
  if (!g.node_index(probe_x))
    throw std::invalid_argument("RunConfig: probe_x is not a grid node");
}

NoiseConfig RunConfig::noise() const {
  NoiseConfig cfg = NoiseConfig::make(alpha, sigma, jump_cutoff);
  if (cfg.m != m)
    throw std::invalid_argument("RunConfig: m does not match the number of sigma components");
  return cfg;
}

SpaceTimeGrid RunConfig::grid() const {
  SpaceTimeGrid g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.dx = dx;
  g.t_max = t_max;
  g.dt = dt;
  g.snapshot_times = snapshot_times;
  return g;
}

Metadata RunConfig::metadata(const std::string& command) const {
  Metadata meta;
  meta.set("command", command);
  meta.set("alpha", alpha);
  meta.set("m", static_cast<long>(m));
  meta.set("sigma", join_doubles(sigma));
  meta.set("theta", noise().theta);
  meta.set("jump_cutoff", jump_cutoff);
  meta.set("max_rejects", static_cast<long>(max_rejects));
  meta.set("x_min", x_min);
  meta.set("x_max", x_max);
  meta.set("dx", dx);
  meta.set("t_max", t_max);
  meta.set("dt", dt);
  meta.set("snapshot_times", join_doubles(snapshot_times));
  meta.set("ic", ic_name);
  meta.set("ic_param", ic_param);
  meta.set("n_samples", n_samples);
  meta.set("seed", seed);
  meta.set("probe_x", probe_x);
  meta.set("series_stride", series_stride);
  meta.set("pde_pad", pde_pad);
  meta.set("pde_safety", pde_safety);
  meta.set("pde_dt", pde_dt);
  meta.set("quad_core_radius", quad_core_radius);
  meta.set("quad_nodes", static_cast<long>(quad_nodes));
  meta.set("fit_lo", fit_lo);
  meta.set("fit_hi", fit_hi);
  meta.set("fit_mode", fit_mode);
  meta.set("replicates", static_cast<long>(replicates));
  meta.set("tail_lo", tail_lo);
  meta.set("tail_hi", tail_hi);
  meta.set("compare_allowance_frac", compare_allowance_frac);
  return meta;
}

void RunConfig::apply(const std::string& key, const std::string& value) {
  if (key == "alpha") alpha = std::stod(value);
  else if (key == "m") m = std::stoi(value);
  else if (key == "sigma") { sigma = parse_double_list(value); m = static_cast<int>(sigma.size()); }
  else if (key == "jump_cutoff") jump_cutoff = std::stod(value);
  else if (key == "max_rejects") max_rejects = std::stoi(value);
  else if (key == "x_min") x_min = std::stod(value);
  else if (key == "x_max") x_max = std::stod(value);
  else if (key == "dx") dx = std::stod(value);
  else if (key == "t_max") t_max = std::stod(value);
  else if (key == "dt") dt = std::stod(value);
  else if (key == "snapshot_times") snapshot_times = parse_double_list(value);
  else if (key == "ic") ic_name = value;
  else if (key == "ic_param") ic_param = std::stod(value);
  else if (key == "n_samples") n_samples = std::stol(value);
  else if (key == "seed") seed = std::stoull(value);
  else if (key == "workers") workers = std::stoi(value);
  else if (key == "probe_x") probe_x = std::stod(value);
  else if (key == "series_stride") series_stride = std::stol(value);
  else if (key == "pde_pad") pde_pad = std::stod(value);
  else if (key == "pde_safety") pde_safety = std::stod(value);
  else if (key == "pde_dt") pde_dt = std::stod(value);
  else if (key == "quad_core_radius") quad_core_radius = std::stod(value);
  else if (key == "quad_nodes") quad_nodes = std::stoi(value);
  else if (key == "fit_lo") fit_lo = std::stod(value);
  else if (key == "fit_hi") fit_hi = std::stod(value);
  else if (key == "fit_window") {
    const auto w = parse_double_list(value);
    if (w.size() != 2) throw std::invalid_argument("fit_window needs two values 'lo,hi'");
    fit_lo = w[0];
    fit_hi = w[1];
  }
  else if (key == "fit_mode") fit_mode = value;
  else if (key == "replicates") replicates = std::stoi(value);
  else if (key == "tail_lo") tail_lo = std::stod(value);
  else if (key == "tail_hi") tail_hi = std::stod(value);
  else if (key == "compare_allowance_frac") compare_allowance_frac = std::stod(value);
  else if (key == "out") out_dir = value;
  else throw std::invalid_argument("unknown config key '" + key + "'");
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  RunConfig cfg;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected 'key = value'");
    cfg.apply(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

}  // namespace levy_transport
