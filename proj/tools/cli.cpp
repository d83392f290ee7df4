#include "cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "shapedecomp/decompose.hpp"
#include "shapedecomp/density.hpp"
#include "shapedecomp/ecg.hpp"
#include "shapedecomp/errors.hpp"
#include "shapedecomp/harmonics.hpp"
#include "shapedecomp/parallel.hpp"
#include "shapedecomp/shapes.hpp"
#include "shapedecomp/symgroup.hpp"
#include "shapedecomp/version.hpp"

namespace shapedecomp::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  std::ostringstream s;
  for (unsigned int i = 0; i < len; ++i) s << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return s.str();
}

namespace {

// Shortest round-trip decimal form, independent of the locale.
std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// One invocation: the canonical config echo, timings and artifact writer.
class Session {
 public:
  Session(std::string command, json config) : command_(std::move(command)) {
    config_ = std::move(config);
    config_["command"] = command_;
  }

  // SHA-256 of the canonical (sorted-key, compact) config JSON.
  std::string config_hash() const { return sha256_hex(config_.dump()); }

  template <class F>
  auto timed(const std::string& label, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      record(label, t0);
    } else {
      auto r = f();
      record(label, t0);
      return r;
    }
  }

  void write(const fs::path& path, const std::string& content) const {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    {
      std::ofstream out(path, std::ios::binary);
      if (!out) throw InvalidInput("cannot write " + path.string());
      out << content;
    }
    json m;
    m["tool"] = "shapedecomp";
    m["version"] = version();
    m["command"] = command_;
    m["config"] = config_;
    m["config_sha256"] = config_hash();
    m["artifact"] = path.filename().string();
    m["artifact_sha256"] = sha256_hex(content);
    m["threads"] = thread_count();
    for (const auto& [name, v] : dependency_versions()) m["libraries"][name] = v;
    for (const auto& [label, seconds] : timings_) m["timings_seconds"][label] = seconds;
    std::ofstream man(path.string() + ".manifest.json", std::ios::binary);
    man << m.dump(2) << "\n";
  }

 private:
  void record(const std::string& label, std::chrono::steady_clock::time_point t0) {
    timings_.emplace_back(label, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }

  std::string command_;
  json config_;
  std::vector<std::pair<std::string, double>> timings_;
};

int print_report(std::ostream& out, const Report& r) {
  int failed = 0;
  for (const auto& c : r.checks) {
    out << (c.pass ? "PASS  " : "FAIL  ") << c.name;
    if (!c.detail.empty()) out << "  (" << c.detail << ")";
    out << "\n";
    failed += !c.pass;
  }
  out << r.checks.size() << " checks, " << failed << " failed\n";
  return failed == 0 ? kSuccess : kIdentityError;
}

// ---------------------------------------------------------------------------
// Verification suites

Report shapes_suite(bool with_span) {
  Report r;
  const auto syz = check_syzygies();
  r.add("syzygies vanish identically", syz.all_zero(), std::to_string(syz.entries.size()) + " relations");
  r.add("degree dimensions (1,2,2,1)", degree_dimensions(3) == std::vector<long>{1, 2, 2, 1});
  r.merge(verify_shape_table());
  r.merge(verify_q_basis(q_basis()));
  r.add("septiplet identity", septiplet_identity().holds());
  r.merge(verify_triplet_closure());
  if (with_span) {
    const auto span = verify_derivative_span();
    r.add("shapes lie in the derivative span of the source shape", span.pass(),
          std::to_string(span.rows.size()) + " degrees");
  }
  return r;
}

Report group_suite() {
  Report r;
  r.merge(verify_rep_matrices());
  r.merge(verify_character_identities());
  return r;
}

// Random Ψ = Σ p_i S_i: exact recovery and numeric agreement.
Report round_trips(int count, std::uint64_t seed, int max_degree) {
  Report r;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-1.5, 1.5);
  for (int t = 0; t < count; ++t) {
    const auto ra = random_alternating(rng, max_degree);
    const auto phi = extract_bosonic_symbolic(ra.psi);
    bool exact = true, bosonic = true;
    for (int i = 0; i < kNumShapes; ++i) {
      exact = exact && phi.phi[i] == ra.p[i];
      bosonic = bosonic && symmetry_check(phi.phi[i], Symmetry::bosonic);
    }
    const PolyEvaluator psi(ra.psi);
    std::vector<PolyEvaluator> pe;
    for (const auto& p : phi.phi) pe.emplace_back(p);
    double worst = 0;
    for (int k = 0; k < 5; ++k) {
      std::array<double, 9> v;
      for (double& x : v) x = coord(rng);
      BosonicVector<double> num;
      try {
        num = extract_bosonic_numeric([&](std::span<const double, 9> q) { return psi(q); }, v);
      } catch (const NearSingular&) {
        --k;
        continue;
      }
      // Error relative to the largest component (at least 1).
      double scale = 1, err = 0;
      for (int i = 0; i < kNumShapes; ++i) {
        const double ref = pe[i](v);
        scale = std::max(scale, std::abs(ref));
        err = std::max(err, std::abs(num.phi[i] - ref));
      }
      worst = std::max(worst, err / scale);
    }
    const std::string tag = "round trip " + std::to_string(t);
    r.add(tag + ": exact recovery", exact, std::to_string(ra.psi.size()) + " terms");
    r.add(tag + ": bosonic coefficients", bosonic);
    r.add(tag + ": numeric agreement", worst < 1e-9, "max rel " + fmt(worst));
  }
  return r;
}

Report decompose_suite() {
  Report r;
  r.merge(verify_m_matrices());
  r.merge(verify_eta_bar_from_extraction());
  r.merge(round_trips(3, 1, 3));
  return r;
}

// ---------------------------------------------------------------------------

std::array<double, 9> parse_point(const std::string& text) {
  std::array<double, 9> v{};
  std::string s = text;
  for (char& c : s)
    if (c == ',') c = ' ';
  std::istringstream in(s);
  in.imbue(std::locale::classic());
  std::string rest;
  for (double& x : v)
    if (!(in >> x)) throw InvalidInput("--point needs 9 comma-separated numbers");
  if (in >> rest) throw InvalidInput("--point needs exactly 9 numbers");
  return v;
}

json stage_json(const StageReport& s) {
  return {{"size", s.size}, {"energy", s.energy}, {"virial", s.virial}, {"evaluations", s.evaluations},
          {"stalled", s.stalled}};
}

struct Options {
  // verify / shapes / group
  std::string verify_target = "all";
  bool skip_span = false;
  std::string dump_format = "json";
  std::string dump_out;
  // decompose
  std::string input, mode = "symbolic", point, out;
  double eps = kVandermondeEps;
  int selftest_count = 10, selftest_degree = 4;
  std::uint64_t seed = 1;
  // ecg
  std::vector<int> sizes{1, 2, 3, 4, 6, 9};
  std::uint64_t ecg_seed = 7;
  int restarts = 8, sweeps = 40, iterations = 3000;
  std::string basis, ecg_out, weights_out;
  // density
  std::string kind = "rho", grid = "-0.5:0.5:21", method = "auto", density_out;
  long samples = 2000;
  std::uint64_t density_seed = 1;
  int threads = 0;
};

int cmd_verify(const Options& o, std::ostream& out) {
  Report r;
  const auto& t = o.verify_target;
  if (t != "shapes" && t != "group" && t != "decompose" && t != "all")
    throw InvalidInput("verify target must be shapes, group, decompose or all");
  if (t == "shapes" || t == "all") r.merge(shapes_suite(!o.skip_span));
  if (t == "group" || t == "all") r.merge(group_suite());
  if (t == "decompose" || t == "all") r.merge(decompose_suite());
  return print_report(out, r);
}

int cmd_shapes_dump(const Options& o, std::ostream& out) {
  const auto& s = canonical_shapes();
  std::string text;
  if (o.dump_format == "json") {
    json j;
    j["shapes"] = json::array();
    for (int i = 0; i < kNumShapes; ++i)
      j["shapes"].push_back({{"index", i},
                             {"block", s.block_of[i]},
                             {"formal", s.formal[i].to_string()},
                             {"poly", json::parse(to_json(s.shapes[i]))}});
    text = j.dump(2) + "\n";
  } else if (o.dump_format == "text") {
    for (int i = 0; i < kNumShapes; ++i)
      text += "S" + std::to_string(i) + " [I" + std::to_string(s.block_of[i]) + "] = " + s.formal[i].to_string() +
              " = " + s.shapes[i].to_string() + "\n";
  } else {
    throw InvalidInput("--format must be json or text");
  }
  if (o.dump_out.empty()) {
    out << text;
  } else {
    Session session("shapes dump", {{"format", o.dump_format}});
    session.write(o.dump_out, text);
  }
  return kSuccess;
}

int cmd_decompose(const Options& o, std::ostream& out) {
  if (o.input.empty()) throw InvalidInput("decompose needs --input");
  if (o.mode != "symbolic" && o.mode != "numeric") throw InvalidInput("--mode must be symbolic or numeric");
  const std::string text = read_file(o.input);
  json config{{"input_sha256", sha256_hex(text)}, {"mode", o.mode}};
  if (o.mode == "numeric") {
    if (o.point.empty()) throw InvalidInput("numeric mode needs --point");
    config["point"] = o.point;
    config["eps"] = o.eps;
  }
  Session session("decompose", config);
  const Poly9 psi = poly_from_json(text);
  if (!symmetry_check(psi, Symmetry::alternating))
    throw NotAlternating("input is not alternating under diagonal particle exchange");
  json result;
  if (o.mode == "symbolic") {
    result = json::parse(session.timed("extract", [&] { return to_json(extract_bosonic_symbolic(psi)); }));
  } else {
    const auto v = parse_point(o.point);
    const PolyEvaluator ev(psi);
    result = json::parse(session.timed("extract", [&] {
      return to_json(extract_bosonic_numeric([&](std::span<const double, 9> q) { return ev(q); }, v, o.eps));
    }));
    result["point"] = v;
  }
  result["config_sha256"] = session.config_hash();
  const std::string dumped = result.dump(2) + "\n";
  if (o.out.empty())
    out << dumped;
  else
    session.write(o.out, dumped);
  return kSuccess;
}

int cmd_selftest(const Options& o, std::ostream& out) {
  if (o.selftest_count < 1 || o.selftest_degree < 0) throw InvalidInput("selftest needs count >= 1, degree >= 0");
  return print_report(out, round_trips(o.selftest_count, o.seed, o.selftest_degree));
}

int cmd_ecg_optimize(const Options& o, std::ostream& out) {
  if (o.ecg_out.empty()) throw InvalidInput("ecg optimize needs --out");
  json sizes = o.sizes;
  Session session("ecg optimize", {{"sizes", sizes},
                                   {"seed", o.ecg_seed},
                                   {"restarts", o.restarts},
                                   {"sweeps", o.sweeps},
                                   {"iterations", o.iterations}});
  OptimizeOptions opt;
  opt.sizes = o.sizes;
  opt.seed = o.ecg_seed;
  opt.restarts = o.restarts;
  opt.search_sweeps = o.sweeps;
  opt.max_iterations = o.iterations;
  out << "    N          energy        V/T  evaluations\n";
  opt.progress = [&](const StageReport& r) {
    out << std::setw(5) << r.size << "  " << std::setw(14) << fmt(r.energy) << "  " << std::setw(9)
        << fmt(std::round(r.virial * 1e6) / 1e6) << "  " << std::setw(11) << r.evaluations
        << (r.stalled ? "  stalled" : "") << "\n"
        << std::flush;
  };
  const auto result = session.timed("optimize", [&] { return optimize_basis(opt); });
  json j = json::parse(basis_to_json(result.best()));
  j["stages"] = json::array();
  for (const auto& r : result.reports) j["stages"].push_back(stage_json(r));
  j["config_sha256"] = session.config_hash();
  session.write(o.ecg_out, j.dump(2) + "\n");
  return kSuccess;
}

int cmd_ecg_weights(const Options& o, std::ostream& out) {
  if (o.basis.empty() || o.weights_out.empty()) throw InvalidInput("ecg weights needs --basis and --out");
  const std::string text = read_file(o.basis);
  Session session("ecg weights", {{"basis_sha256", sha256_hex(text)}});
  const ECGBasis basis = basis_from_json(text);
  const auto w = session.timed("weights", [&] { return block_amplitudes(basis); });
  std::string csv = "# config_sha256=" + session.config_hash() + "\nk,a_k,w_k\n";
  double total = 0;
  for (int k = 0; k < kNumBlocks; ++k) {
    csv += std::to_string(k) + "," + fmt(w.a[k]) + "," + fmt(w.w[k]) + "\n";
    total += w.w[k];
  }
  session.write(o.weights_out, csv);
  out << "N = " << w.basis_size << ", E = " << fmt(w.energy) << ", sum w_k = " << fmt(total)
      << ", orthonormality residual = " << fmt(w.orthonormality_residual) << "\n";
  return kSuccess;
}

int cmd_density(const Options& o, std::ostream& out) {
  if (o.basis.empty() || o.density_out.empty()) throw InvalidInput("density needs --basis and --out");
  const std::string text = read_file(o.basis);
  const DensityKind kind = DensityKind::parse(o.kind);
  const GridAxis axis = GridAxis::parse(o.grid);
  GridOptions g;
  if (o.method == "auto")
    g.method = DensityMethod::Auto;
  else if (o.method == "mc")
    g.method = DensityMethod::MonteCarlo;
  else if (o.method == "quadrature")
    g.method = DensityMethod::Quadrature;
  else
    throw InvalidInput("--method must be auto, mc or quadrature");
  g.mc.samples = o.samples;
  g.mc.seed = o.density_seed;
  g.mc.eps = o.eps;
  Session session("density", {{"basis_sha256", sha256_hex(text)},
                              {"kind", kind.name()},
                              {"grid", o.grid},
                              {"method", o.method},
                              {"samples", o.samples},
                              {"seed", o.density_seed},
                              {"eps", o.eps}});
  const ECGBasis basis = basis_from_json(text);
  DensityGrid grid = session.timed("density", [&] { return density_grid(basis, kind, {axis, axis, axis}, g); });
  grid.metadata.emplace_back("config_sha256", session.config_hash());
  std::ostringstream s;
  write_grid(s, grid);
  session.write(o.density_out, s.str());
  out << kind.name() << ": " << grid.values.size() << " points written to " << o.density_out << "\n";
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Shape decomposition of three-fermion wave functions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version());
  app.add_option("--threads", o.threads, "Worker threads (overrides SHAPEDECOMP_THREADS)")->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "Run identity checks");
  verify->add_option("target", o.verify_target, "shapes, group, decompose or all")
      ->check(CLI::IsMember({"shapes", "group", "decompose", "all"}));
  verify->add_flag("--skip-span", o.skip_span, "Skip the derivative-span check");

  auto* shapes = app.add_subcommand("shapes", "Shape table");
  shapes->require_subcommand(1);
  auto* shapes_verify = shapes->add_subcommand("verify", "Check all shape identities");
  shapes_verify->add_flag("--skip-span", o.skip_span, "Skip the derivative-span check");
  auto* shapes_dump = shapes->add_subcommand("dump", "Print the 36 shapes");
  shapes_dump->add_option("--format", o.dump_format, "json or text")->check(CLI::IsMember({"json", "text"}));
  shapes_dump->add_option("--out", o.dump_out, "Output file (default stdout)");

  auto* group = app.add_subcommand("group", "Symmetry group");
  group->require_subcommand(1);
  auto* group_verify = group->add_subcommand("verify", "Check character and representation identities");

  auto* decompose = app.add_subcommand("decompose", "Extract the bosonic coefficients of a polynomial");
  decompose->add_option("--input", o.input, "Polynomial JSON file");
  decompose->add_option("--mode", o.mode, "symbolic or numeric");
  decompose->add_option("--point", o.point, "x1,x2,x3,y1,y2,y3,z1,z2,z3 (numeric mode)");
  decompose->add_option("--eps", o.eps, "Coincidence guard (numeric mode)");
  decompose->add_option("--out", o.out, "Output file (default stdout)");
  auto* selftest = decompose->add_subcommand("selftest", "Random round trips");
  selftest->add_option("--count", o.selftest_count, "Number of random wave functions");
  selftest->add_option("--seed", o.seed, "Random seed");
  selftest->add_option("--max-degree", o.selftest_degree, "Degree bound of the bosonic coefficients");

  auto* ecg = app.add_subcommand("ecg", "Correlated-Gaussian variational solver");
  ecg->require_subcommand(1);
  auto* optimize = ecg->add_subcommand("optimize", "Optimize a basis through the stage sequence");
  optimize->add_option("--sizes", o.sizes, "Basis sizes, e.g. 1,2,3,4,6,9")->delimiter(',');
  optimize->add_option("--seed", o.ecg_seed, "Random seed");
  optimize->add_option("--restarts", o.restarts, "Random starts for the first stage");
  optimize->add_option("--sweeps", o.sweeps, "Random-search sweeps per stage");
  optimize->add_option("--iterations", o.iterations, "Gradient iterations per stage");
  optimize->add_option("--out", o.ecg_out, "Basis JSON file")->required();
  auto* weights = ecg->add_subcommand("weights", "Shape-block weights of a basis");
  weights->add_option("--basis", o.basis, "Basis JSON file")->required();
  weights->add_option("--out", o.weights_out, "CSV file (k,a_k,w_k)")->required();

  auto* density = app.add_subcommand("density", "Sample a density on a cubic grid");
  density->add_option("--basis", o.basis, "Basis JSON file")->required();
  density->add_option("--kind", o.kind, "rho or D0..D35");
  density->add_option("--grid", o.grid, "lo:hi:count for every axis");
  density->add_option("--method", o.method, "auto, mc or quadrature");
  density->add_option("--samples", o.samples, "Monte Carlo samples per grid point");
  density->add_option("--seed", o.density_seed, "Random seed");
  density->add_option("--eps", o.eps, "Coincidence guard");
  density->add_option("--out", o.density_out, "Grid file")->required();

  std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kValidationError;
  }

  try {
    if (o.threads > 0) setenv("SHAPEDECOMP_THREADS", std::to_string(o.threads).c_str(), 1);
    if (verify->parsed()) return cmd_verify(o, out);
    if (shapes_verify->parsed()) {
      o.verify_target = "shapes";
      return cmd_verify(o, out);
    }
    if (shapes_dump->parsed()) return cmd_shapes_dump(o, out);
    if (group_verify->parsed()) {
      o.verify_target = "group";
      return cmd_verify(o, out);
    }
    if (selftest->parsed()) return cmd_selftest(o, out);
    if (decompose->parsed()) return cmd_decompose(o, out);
    if (optimize->parsed()) return cmd_ecg_optimize(o, out);
    if (weights->parsed()) return cmd_ecg_weights(o, out);
    if (density->parsed()) return cmd_density(o, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  } catch (const IdentityError& e) {
    err << "identity check failed: " << e.what() << "\n";
    return kIdentityError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  err << "no command given\n";
  return kValidationError;
}

}  // namespace shapedecomp::cli
