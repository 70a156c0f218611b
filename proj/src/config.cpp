#include "hdgpod/config.hpp"

#include "hdgpod/expression.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace hdgpod {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream is(value);
  is.imbue(std::locale::classic());
  T v{};
  is >> v;
  if (is.fail() || !(is >> std::ws).eof())
    throw ConfigError("invalid value for " + key + ": '" + value + "'");
  return v;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << v;
  return os.str();
}

const char* kManufacturedSolution = "exp(-t)*sin(pi*x)*sin(pi*y)";

}  // namespace

std::string RunConfig::exact_solution() const {
  return problem == "manufactured" ? kManufacturedSolution : std::string();
}

std::map<std::string, double> RunConfig::constants() const { return {{"c", c}, {"tau", tau}}; }

bool RunConfig::zero_source() const { return trim(f) == "0"; }

void RunConfig::validate() const {
  if (dim != 2 && dim != 3) throw ConfigError("dim must be 2 or 3");
  if (n < 1) throw ConfigError("n must be at least 1");
  if (k < 0 || k > ReferenceBasis::kMaxDegree)
    throw ConfigError("k must lie in [0, " + std::to_string(ReferenceBasis::kMaxDegree) + "]");
  if (!(c > 0.0)) throw ConfigError("c must be positive");
  if (!(tau > 0.0)) throw ConfigError("tau must be positive");
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(T > 0.0)) throw ConfigError("T must be positive");
  const double steps = T / dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
    throw ConfigError("T must be an integer multiple of dt");
  if (snapshot_stride < 1) throw ConfigError("snapshot_stride must be at least 1");
  if (threads < 1) throw ConfigError("threads must be at least 1");
  if (pod_method != "svd" && pod_method != "snapshots")
    throw ConfigError("pod_method must be svd or snapshots");
  if (max_modes < -1 || max_modes == 0) throw ConfigError("max_modes must be positive or -1");
  for (int r : r_list)
    if (r < 1) throw ConfigError("r-list entries must be positive");
  try {
    (void)Expression(u0, constants());
    (void)Expression(f, constants());
  } catch (const ExpressionError& e) {
    throw ConfigError(e.what());
  }
}

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
  std::string rl;
  for (std::size_t i = 0; i < r_list.size(); ++i) rl += (i ? "," : "") + std::to_string(r_list[i]);
  return {{"problem", problem},
          {"dim", std::to_string(dim)},
          {"n", std::to_string(n)},
          {"k", std::to_string(k)},
          {"c", format_double(c)},
          {"tau", format_double(tau)},
          {"dt", format_double(dt)},
          {"T", format_double(T)},
          {"u0", u0},
          {"f", f},
          {"r_list", rl},
          {"out", out},
          {"snapshot_stride", std::to_string(snapshot_stride)},
          {"pod_method", pod_method},
          {"max_modes", std::to_string(max_modes)},
          {"seed", std::to_string(seed)},
          {"threads", std::to_string(threads)}};
}

std::vector<std::string> preset_names() { return {"square", "cube", "manufactured"}; }

RunConfig preset(const std::string& name) {
  RunConfig cfg;
  if (name == "square") return cfg;
  if (name == "cube") {
    cfg.problem = name;
    cfg.dim = 3;
    cfg.n = 16;
    cfg.u0 = "sin(pi*x)*sin(pi*y)*sin(pi*z)*exp(x)*cos(y)*z";
    cfg.r_list = {3, 6, 9, 12, 15};
    return cfg;
  }
  if (name == "manufactured") {
    cfg.problem = name;
    cfg.n = 8;
    cfg.c = 1.0;
    cfg.dt = 0.01;
    cfg.T = 0.5;
    cfg.u0 = "sin(pi*x)*sin(pi*y)";
    cfg.f = "(2*pi^2/c - 1)*exp(-t)*sin(pi*x)*sin(pi*y)";
    cfg.r_list = {2, 4, 6};
    return cfg;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

void apply_setting(RunConfig& cfg, const std::string& key_in, const std::string& value_in) {
  const std::string key = trim(key_in);
  const std::string value = trim(value_in);
  if (key == "problem") cfg.problem = value;
  else if (key == "dim") cfg.dim = parse_number<int>(key, value);
  else if (key == "n") cfg.n = parse_number<int>(key, value);
  else if (key == "k") cfg.k = parse_number<int>(key, value);
  else if (key == "c") cfg.c = parse_number<double>(key, value);
  else if (key == "diffusivity") cfg.c = 1.0 / parse_number<double>(key, value);
  else if (key == "tau") cfg.tau = parse_number<double>(key, value);
  else if (key == "dt") cfg.dt = parse_number<double>(key, value);
  else if (key == "T") cfg.T = parse_number<double>(key, value);
  else if (key == "u0") cfg.u0 = value;
  else if (key == "f") cfg.f = value;
  else if (key == "r_list" || key == "r-list") cfg.r_list = parse_int_list(value);
  else if (key == "out") cfg.out = value;
  else if (key == "snapshot_stride") cfg.snapshot_stride = parse_number<int>(key, value);
  else if (key == "pod_method") cfg.pod_method = value;
  else if (key == "max_modes") cfg.max_modes = parse_number<int>(key, value);
  else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "threads") cfg.threads = parse_number<int>(key, value);
  else throw ConfigError("unknown setting '" + key + "'");
}

void apply_config_text(RunConfig& cfg, std::istream& in, const std::string& origin) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key == "preset") {
      cfg = preset(trim(line.substr(eq + 1)));
      continue;
    }
    try {
      apply_setting(cfg, key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  apply_config_text(cfg, in, path);
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_number<int>("r-list", item));
  }
  if (out.empty()) throw ConfigError("r-list is empty");
  return out;
}

void write_manifest(std::ostream& os, const RunConfig& cfg,
                    const std::map<std::string, std::string>& extra) {
  for (const auto& [k, v] : cfg.entries()) os << "# " << k << '=' << v << '\n';
  for (const auto& [k, v] : extra) os << "# " << k << '=' << v << '\n';
}

std::map<std::string, std::string> read_manifest(std::istream& in) {
  std::map<std::string, std::string> out;
  while (in.peek() == '#') {
    std::string line;
    std::getline(in, line);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    out[trim(line.substr(1, eq - 1))] = line.substr(eq + 1);
  }
  return out;
}

Problem build_problem(const RunConfig& cfg) {
  cfg.validate();
  Problem p;
  p.disc = make_discretization(cfg.dim, cfg.n, cfg.k);
  p.system = assemble_hdg(p.disc, cfg.c, cfg.tau);
  const Expression u0(cfg.u0, cfg.constants());
  p.beta0 = solve_initial(p.system, assemble_load(*p.disc, [&](const Point& x) {
    return u0(x[0], x[1], x[2], 0.0);
  }));
  if (!cfg.zero_source()) {
    const auto f = std::make_shared<const Expression>(cfg.f, cfg.constants());
    const auto disc = p.disc;
    p.load = [f, disc](double t) {
      return assemble_load(*disc, [&](const Point& x) { return (*f)(x[0], x[1], x[2], t); });
    };
  }
  return p;
}

}  // namespace hdgpod
