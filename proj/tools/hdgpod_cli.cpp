#include "CLI11.hpp"

#include "hdgpod/analysis.hpp"
#include "hdgpod/config.hpp"
#include "hdgpod/parallel.hpp"
#include "hdgpod/snapshot_io.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace hdgpod;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct CommonOptions {
  std::string config_file;
  std::string preset_name;
  std::string out;
  std::string r_list;
  std::vector<std::string> settings;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_file, "Flat key=value config file")->check(CLI::ExistingFile);
  cmd->add_option("--preset", o.preset_name, "square | cube | manufactured");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--r-list", o.r_list, "Comma-separated reduced orders, e.g. 7,10,13");
  cmd->add_option("--set", o.settings, "Override one setting, key=value (repeatable)");
  cmd->add_option("--seed", o.seed, "Seed for randomized checks");
  cmd->add_option("--threads", o.threads, "Worker threads for element loops")->check(CLI::PositiveNumber);
}

RunConfig resolve_config(const CommonOptions& o, CLI::App* cmd) {
  RunConfig cfg = preset(o.preset_name.empty() ? "square" : o.preset_name);
  if (!o.config_file.empty()) apply_config_file(cfg, o.config_file);
  for (const std::string& s : o.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
    apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  if (!o.out.empty()) cfg.out = o.out;
  if (!o.r_list.empty()) cfg.r_list = parse_int_list(o.r_list);
  if (cmd->count("--seed")) cfg.seed = o.seed;
  if (o.threads > 0) cfg.threads = o.threads;
  cfg.validate();
  set_num_threads(cfg.threads);
  return cfg;
}

void log(const std::string& msg) { std::cerr << "[hdgpod] " << msg << std::endl; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

std::map<std::string, std::string> manifest_of(const RunConfig& cfg, const std::string& command,
                                               std::uint64_t mesh_hash) {
  std::map<std::string, std::string> m;
  for (const auto& [k, v] : cfg.entries()) m[k] = v;
  m["command"] = command;
  m["mesh_hash"] = hex(mesh_hash);
  return m;
}

std::ofstream open_output(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path.string());
  return os;
}

void write_manifest_lines(std::ostream& os, const std::map<std::string, std::string>& m) {
  for (const auto& [k, v] : m) os << "# " << k << '=' << v << '\n';
}

fs::path snapshot_stem(const RunConfig& cfg, const char* name) {
  return fs::path(cfg.out) / "snapshots" / name;
}

fs::path basis_stem(const RunConfig& cfg, const char* name) {
  return fs::path(cfg.out) / "bases" / name;
}

void check_mesh(const MatrixHeader& h, const Problem& p, const std::string& what) {
  if (h.mesh_hash != p.disc->mesh.hash())
    throw ConfigError(what + " was produced on a different mesh than the current config");
}

// ---------------------------------------------------------------- fom

int cmd_fom(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const Problem p = build_problem(cfg);
  const double assemble_s = seconds_since(t0);
  const DofLayout& L = p.system.layout();
  log("mesh " + std::to_string(p.disc->mesh.num_elements()) + " elements, N1=" +
      std::to_string(L.n1()) + " N2=" + std::to_string(L.n2()) + " N3=" + std::to_string(L.n3()));
  fs::create_directories(fs::path(cfg.out) / "snapshots");
  const auto manifest = manifest_of(cfg, "fom", p.disc->mesh.hash());

  const auto t1 = std::chrono::steady_clock::now();
  const CondensedStepper stepper(p.system, cfg.dt);
  const double factor_s = seconds_since(t1);

  MatrixWriter wq(snapshot_stem(cfg, "flux").string(), L.n1());
  MatrixWriter wu(snapshot_stem(cfg, "scalar").string(), L.n2());
  MatrixWriter wh(snapshot_stem(cfg, "trace").string(), L.n3());
  std::vector<double> times;
  double max_residual = 0.0;
  const int N = step_count(cfg.dt, cfg.T);
  Eigen::VectorXd beta_prev = p.beta0;
  const auto t2 = std::chrono::steady_clock::now();
  run_steps(stepper, cfg.T, p.load, p.beta0, [&](int n, double t, const HdgState& s) {
    if (n == 1 || n == N)
      max_residual = std::max(
          max_residual, step_residual(p.system, cfg.dt, beta_prev, p.load ? p.load(t) : Eigen::VectorXd(), s));
    beta_prev = s.beta;
    if (n % cfg.snapshot_stride != 0) return;
    wq.append(s.alpha);
    wu.append(s.beta);
    wh.append(s.gamma);
    times.push_back(t);
    if (n % std::max(1, N / 10) == 0) log("step " + std::to_string(n) + "/" + std::to_string(N));
  });
  const double step_s = seconds_since(t2);

  MatrixHeader h;
  h.manifest = manifest;
  h.mesh_hash = p.disc->mesh.hash();
  h.times = times;
  wq.finish(h);
  wu.finish(h);
  wh.finish(h);
  MatrixHeader h0 = h;
  h0.times = {0.0};
  write_matrix(snapshot_stem(cfg, "initial").string(), p.beta0, h0);

  auto os = open_output(fs::path(cfg.out) / "fom_timing.txt");
  write_manifest_lines(os, manifest);
  os << std::scientific << std::setprecision(6);
  os << "assembly_seconds " << assemble_s << "\nfactorization_seconds " << factor_s
     << "\nstepping_seconds " << step_s << "\nsteps " << N << "\nsnapshots " << times.size()
     << "\nmax_step_residual " << max_residual << '\n';
  log("fom done: " + std::to_string(times.size()) + " snapshots, stepping " +
      std::to_string(step_s) + " s");
  return 0;
}

// ---------------------------------------------------------------- pod

PodOptions pod_options(const RunConfig& cfg) {
  PodOptions o;
  o.method = cfg.pod_method == "snapshots" ? PodMethod::Snapshots : PodMethod::WeightedSvd;
  o.max_modes = cfg.max_modes;
  return o;
}

Eigen::VectorXd snapshot_weights(const RunConfig& cfg, long count) {
  return uniform_time_weights(static_cast<int>(count), cfg.dt * cfg.snapshot_stride);
}

int cmd_pod(const RunConfig& cfg) {
  const Problem p = build_problem(cfg);
  const auto manifest = manifest_of(cfg, "pod", p.disc->mesh.hash());
  fs::create_directories(fs::path(cfg.out) / "bases");
  struct Var {
    const char* name;
    const BlockDiagonalMatrix* W;
  };
  const Var vars[] = {{"flux", &p.system.A7}, {"scalar", &p.system.M}, {"trace", &p.system.A8}};
  std::vector<PodBasis> bases;
  for (const Var& v : vars) {
    MatrixHeader h;
    Eigen::MatrixXd Y = read_matrix(snapshot_stem(cfg, v.name).string(), &h);
    check_mesh(h, p, std::string("snapshot file ") + v.name);
    if (Y.rows() != v.W->rows())
      throw IoError(std::string("snapshot file ") + v.name + " does not match the discretization");
    const auto t0 = std::chrono::steady_clock::now();
    PodBasis b = compute_pod_in_place(Y, *v.W, snapshot_weights(cfg, Y.cols()), pod_options(cfg), v.name);
    Y.resize(0, 0);
    log(std::string(v.name) + ": rank " + std::to_string(b.rank) + ", " +
        std::to_string(b.stored_modes()) + " modes stored, " +
        std::to_string(seconds_since(t0)) + " s");
    MatrixHeader bh;
    bh.manifest = manifest;
    bh.mesh_hash = h.mesh_hash;
    write_basis(basis_stem(cfg, v.name).string(), b, bh);
    b.modes.resize(0, 0);
    bases.push_back(std::move(b));
  }

  {
    auto os = open_output(fs::path(cfg.out) / "singular_values.csv");
    write_manifest_lines(os, manifest);
    write_singular_values_csv(os, bases[0], bases[1], bases[2]);
  }
  auto os = open_output(fs::path(cfg.out) / "pod_summary.txt");
  write_manifest_lines(os, manifest);
  os << std::scientific << std::setprecision(6);
  for (const PodBasis& b : bases) os << "rank_" << b.variable << ' ' << b.rank << '\n';
  // Leading trace-to-scalar ratios with interior faces counted twice and once.
  os << "index,sigma_uhat_over_sigma_u,single_count_ratio\n";
  const int n = std::min<int>({20, static_cast<int>(bases[1].singular_values.size()),
                               static_cast<int>(bases[2].singular_values.size())});
  for (int i = 0; i < n; ++i) {
    const double ratio = bases[2].singular_values[i] / bases[1].singular_values[i];
    os << (i + 1) << ',' << csv_number(ratio) << ',' << csv_number(ratio / std::sqrt(2.0)) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- rom

int cmd_rom(const RunConfig& cfg) {
  const Problem p = build_problem(cfg);
  const auto manifest = manifest_of(cfg, "rom", p.disc->mesh.hash());
  const PodBasis flux = read_basis(basis_stem(cfg, "flux").string(), "flux");
  const PodBasis scalar = read_basis(basis_stem(cfg, "scalar").string(), "scalar");
  const PodBasis trace = read_basis(basis_stem(cfg, "trace").string(), "trace");
  check_mesh(read_header(basis_stem(cfg, "flux").string()), p, "basis file flux");

  std::vector<ErrorRow> rows;
  std::ostringstream timing;
  timing << std::scientific << std::setprecision(6);
  const int stride = cfg.snapshot_stride;
  for (int r : cfg.r_list) {
    ErrorRow row;
    row.r = r;
    const int limit = std::min({flux.stored_modes(), scalar.stored_modes(), trace.stored_modes()});
    const int rank = std::min({flux.rank, scalar.rank, trace.rank});
    if (r > rank || r > limit) {
      row.skipped = true;
      row.reason = r > rank ? "r exceeds POD rank " + std::to_string(rank)
                            : "r exceeds stored modes " + std::to_string(limit);
      log("r=" + std::to_string(r) + " skipped: " + row.reason);
      rows.push_back(row);
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    const ReducedModel m = build_reduced(p.system, flux, scalar, trace, r, r, r);
    const ReducedTrajectory traj = rom_run(m, cfg.dt, cfg.T, reduced_initial(m, p.system, p.beta0), p.load);
    row.report.rom_seconds = seconds_since(t0);

    MatrixReader rq(snapshot_stem(cfg, "flux").string());
    MatrixReader ru(snapshot_stem(cfg, "scalar").string());
    check_mesh(rq.header(), p, "snapshot file flux");
    ErrorAccumulator acc(p.system, m);
    Eigen::VectorXd alpha, beta;
    for (long j = 0; rq.next(alpha) && ru.next(beta); ++j) {
      const long n = (j + 1) * stride;  // step index of snapshot j
      acc.add(alpha, beta, traj.scalar.col(n - 1));
    }
    row.report.r1 = row.report.r2 = row.report.r3 = r;
    row.report.q_error = acc.q_error();
    row.report.u_error = acc.u_error();
    fill_lambda_terms(row.report, p.system, flux, scalar, trace);
    log("r=" + std::to_string(r) + " q_error=" + csv_number(row.report.q_error) +
        " u_error=" + csv_number(row.report.u_error));
    timing << "r " << r << " rom_seconds " << row.report.rom_seconds << '\n';
    rows.push_back(row);
  }
  std::map<std::string, std::string> extra = manifest;
  std::ostringstream hs;
  hs << std::setprecision(17) << p.disc->mesh.h();
  extra["mesh_h"] = hs.str();
  {
    auto os = open_output(fs::path(cfg.out) / "errors.csv");
    write_manifest_lines(os, extra);
    write_error_table_csv(os, rows);
  }
  auto os = open_output(fs::path(cfg.out) / "rom_timing.txt");
  write_manifest_lines(os, manifest);
  os << timing.str();
  return 0;
}

// ---------------------------------------------------------------- verify

RunConfig small_suite_config(int dim) {
  RunConfig cfg = preset(dim == 2 ? "square" : "cube");
  cfg.n = dim == 2 ? 4 : 2;
  cfg.dt = 0.02;
  cfg.T = 1.0;
  cfg.r_list = {1, 3};
  return cfg;
}

VerificationReport run_verification(const RunConfig& cfg, bool corrupt) {
  const Problem p = build_problem(cfg);
  const SnapshotSet snaps = run(p.system, cfg.dt, cfg.T, p.load, p.beta0);
  const Eigen::VectorXd w = uniform_time_weights(snaps.size(), cfg.dt);
  PodOptions opt;
  PodBasis flux = compute_pod(snaps.flux, p.system.A7, w, opt, "flux");
  const PodBasis scalar = compute_pod(snaps.scalar, p.system.M, w, opt, "scalar");
  const PodBasis trace = compute_pod(snaps.trace, p.system.A8, w, opt, "trace");
  if (corrupt && flux.stored_modes() > 0) flux.modes.col(0) *= 1.001;
  VerificationInput in;
  in.system = &p.system;
  in.snapshots = &snaps;
  in.flux = &flux;
  in.scalar = &scalar;
  in.trace = &trace;
  in.dt = cfg.dt;
  in.zero_source = cfg.zero_source();
  in.r_values = {0};
  for (int r : cfg.r_list) in.r_values.push_back(r);
  in.seed = cfg.seed;
  return verify_identities(in);
}

int cmd_verify(const RunConfig& base, bool use_given, bool corrupt) {
  std::vector<RunConfig> configs;
  if (use_given) {
    configs.push_back(base);
  } else {
    for (int dim : {2, 3}) {
      RunConfig c = small_suite_config(dim);
      c.out = base.out;
      c.seed = base.seed;
      configs.push_back(c);
    }
  }
  VerificationReport all;
  for (const RunConfig& c : configs) {
    log("verify: dim=" + std::to_string(c.dim) + " n=" + std::to_string(c.n) +
        (corrupt ? " (corrupted flux basis)" : ""));
    VerificationReport rep = run_verification(c, corrupt);
    for (CheckEntry& e : rep.checks) {
      e.name = std::to_string(c.dim) + "d_n" + std::to_string(c.n) + "/" + e.name;
      all.checks.push_back(std::move(e));
    }
  }
  const auto manifest = manifest_of(configs.front(), corrupt ? "verify --corrupt" : "verify", 0);
  {
    auto os = open_output(fs::path(base.out) / "verify.txt");
    write_manifest_lines(os, manifest);
    all.write_text(os);
  }
  {
    auto os = open_output(fs::path(base.out) / "verify.csv");
    write_manifest_lines(os, manifest);
    all.write_csv(os);
  }
  int failed = 0;
  for (const CheckEntry& e : all.checks)
    if (!e.passed && !e.informational) {
      std::cout << "FAILED " << e.name << "  lhs=" << e.lhs << " rhs=" << e.rhs << '\n';
      ++failed;
    }
  std::cout << all.checks.size() << " checks, " << failed << " failed\n";
  return all.all_passed() ? 0 : kExitCheckFailed;
}

// ---------------------------------------------------------------- report

struct CsvTable {
  std::map<std::string, std::string> manifest;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("missing " + path.string() + "; run the producing command first");
  CsvTable t;
  t.manifest = read_manifest(in);
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!s.empty() && s.back() == ',') out.emplace_back();
    return out;
  };
  if (!std::getline(in, line)) throw IoError(path.string() + " has no header row");
  t.columns = split(line);
  while (std::getline(in, line))
    if (!line.empty()) t.rows.push_back(split(line));
  return t;
}

double cell(const CsvTable& t, std::size_t row, const std::string& col) {
  const auto it = std::find(t.columns.begin(), t.columns.end(), col);
  if (it == t.columns.end()) throw IoError("column " + col + " missing");
  const auto j = static_cast<std::size_t>(it - t.columns.begin());
  if (j >= t.rows[row].size() || t.rows[row][j].empty()) return std::nan("");
  return std::stod(t.rows[row][j]);
}

int cmd_report(const RunConfig& cfg) {
  const fs::path out(cfg.out);
  std::ostringstream rep;
  rep << std::scientific << std::setprecision(3);
  if (fs::exists(out / "errors.csv")) {
    const CsvTable e = read_csv(out / "errors.csv");
    std::vector<std::size_t> ok;
    for (std::size_t i = 0; i < e.rows.size(); ++i)
      if (!e.rows[i].empty() && e.rows[i].back() == "ok") ok.push_back(i);
    rep << "ROM errors (" << e.manifest.at("problem") << ", n=" << e.manifest.at("n")
        << ", k=" << e.manifest.at("k") << ")\n";
    rep << std::setw(8) << "r";
    for (std::size_t i : ok) rep << std::setw(12) << e.rows[i][0];
    rep << '\n';
    for (const char* col : {"q_error", "u_error", "lambda_u"}) {
      rep << std::setw(8) << (std::string(col) == "q_error" ? "q" : std::string(col) == "u_error" ? "u" : "Lambda_u");
      for (std::size_t i : ok) rep << std::setw(12) << cell(e, i, col);
      rep << '\n';
    }
    for (std::size_t i = 0; i < e.rows.size(); ++i)
      if (e.rows[i].empty() || e.rows[i].back() != "ok")
        rep << "r=" << e.rows[i][0] << ": " << e.rows[i].back() << '\n';
    if (ok.size() >= 2) {
      for (const char* col : {"q_error", "u_error"}) {
        bool decreasing = true;
        for (std::size_t a = 1; a < ok.size(); ++a)
          decreasing &= cell(e, ok[a], col) < cell(e, ok[a - 1], col);
        const double orders = std::log10(cell(e, ok.front(), col) / cell(e, ok.back(), col));
        rep << col << ": " << (decreasing ? "strictly decreasing" : "NOT monotone") << ", "
            << std::fixed << std::setprecision(2) << orders << " orders from r=" << e.rows[ok.front()][0]
            << " to r=" << e.rows[ok.back()][0] << '\n'
            << std::scientific << std::setprecision(3);
      }
      const double h = std::stod(e.manifest.at("mesh_h"));
      rep << "h * u_error^2 / Lambda_u:";
      for (std::size_t i : ok) rep << ' ' << h * std::pow(cell(e, i, "u_error"), 2) / cell(e, i, "lambda_u");
      rep << '\n';
    }
    rep << '\n';
  }
  if (fs::exists(out / "singular_values.csv")) {
    const CsvTable s = read_csv(out / "singular_values.csv");
    rep << "Singular value decay over the first 20 indices\n";
    for (const char* col : {"sigma_q", "sigma_u", "sigma_uhat"}) {
      const std::size_t last = std::min<std::size_t>(20, s.rows.size()) - 1;
      const double s1 = cell(s, 0, col), s20 = cell(s, last, col);
      rep << "  " << std::setw(10) << col << "  sigma_1=" << s1 << "  sigma_" << last + 1 << '=' << s20
          << "  orders=" << std::fixed << std::setprecision(2) << std::log10(s1 / s20) << '\n'
          << std::scientific << std::setprecision(3);
    }
    rep << '\n';
  }
  if (rep.str().empty()) throw IoError("nothing to report in " + out.string());
  std::cout << rep.str();
  auto os = open_output(out / "report.txt");
  os << rep.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HDG heat equation solver with POD reduced-order models"};
  app.require_subcommand(1);
  CommonOptions opts;
  bool corrupt = false;

  auto* fom = app.add_subcommand("fom", "Run the full-order model and store snapshots");
  auto* pod = app.add_subcommand("pod", "Compute the three weighted PODs of stored snapshots");
  auto* rom = app.add_subcommand("rom", "Sweep reduced orders and tabulate ROM errors");
  auto* verify = app.add_subcommand("verify", "Run the verification battery");
  auto* report = app.add_subcommand("report", "Summarize error tables and singular values");
  for (CLI::App* c : {fom, pod, rom, verify, report}) add_common(c, opts);
  verify->add_flag("--corrupt", corrupt, "Perturb the flux basis to exercise failure reporting");

  CLI11_PARSE(app, argc, argv);
  CLI::App* cmd = app.get_subcommands().front();
  try {
    const RunConfig cfg = resolve_config(opts, cmd);
    if (cmd == fom) return cmd_fom(cfg);
    if (cmd == pod) return cmd_pod(cfg);
    if (cmd == rom) return cmd_rom(cfg);
    if (cmd == verify)
      return cmd_verify(cfg, !opts.preset_name.empty() || !opts.config_file.empty(), corrupt);
    return cmd_report(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
}
