#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fftw3.h>
#include <gmp.h>
#include <json.hpp>

#include "apvar/cache.hpp"
#include "apvar/circle.hpp"
#include "apvar/dirichlet.hpp"
#include "apvar/pipeline.hpp"
#include "apvar/simd/kernels.hpp"
#include "apvar/variance.hpp"
#include "apvar/verify.hpp"
#include "apvar/windows.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace apvar;

namespace {

constexpr const char* kVersion = "0.3.0";

struct RunManifest {
  std::string command;
  json config = json::object();
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  int exit_code = 0;

  void write(const std::string& out_dir) const {
    fs::create_directories(out_dir);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json j = {{"schema_version", 1},
              {"command", command},
              {"config", config},
              {"versions",
               {{"apvar", kVersion}, {"fftw", std::string(fftw_version)}, {"gmp", std::string(gmp_version)}, {"simd", simd::backend_name(simd::active_backend())}}},
              {"wall_time_seconds", wall},
              {"outputs", outputs},
              {"exit_code", exit_code}};
    std::ofstream os(fs::path(out_dir) / "manifest.json");
    os << j.dump(2) << '\n';
  }
};

std::string fmt(double v) { return format_double(v); }

Sequence load_sequence(const std::string& name, std::int64_t n, const SieveCache& cache) {
  if (name.rfind("file:", 0) == 0) {
    const std::string path = name.substr(5);
    std::ifstream is(path);
    if (!is) throw PreconditionError("cannot open sequence file '" + path + "'");
    std::vector<double> vals;
    bool integer = true;
    std::string line;
    std::int64_t expect = 1;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos) throw PreconditionError("sequence file line without comma: '" + line + "'");
      std::int64_t idx = 0;
      double a = 0.0;
      try {
        idx = std::stoll(line.substr(0, comma));
        a = std::stod(line.substr(comma + 1));
      } catch (const std::exception&) {
        if (expect == 1 && vals.empty()) continue;  // header row
        throw PreconditionError("unparsable sequence file line: '" + line + "'");
      }
      if (idx != expect) throw PreconditionError("sequence file must list n = 1, 2, ... in order");
      ++expect;
      integer = integer && a == std::floor(a) && std::abs(a) < 9007199254740992.0;
      vals.push_back(a);
    }
    if (vals.empty()) throw PreconditionError("sequence file '" + path + "' is empty");
    if (n > 0 && static_cast<std::int64_t>(vals.size()) > n) vals.resize(static_cast<std::size_t>(n));
    return Sequence(path, std::move(vals), integer);
  }
  require(n >= 1, "--N must be given for named sequences");
  if (name == "lambda") return cache.get(n, 2).lambda_sequence();
  if (name == "d2" || name == "d3" || name == "d4") {
    const int k = name[1] - '0';
    return cache.get(n, k).divisor_sequence(k);
  }
  throw PreconditionError("unknown sequence '" + name + "' (expected lambda, d2, d3, d4 or file:<path>)");
}

void emit(const std::string& text, const std::string& out, RunManifest& m) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
    std::ofstream os(out, std::ios::binary);
    os << text;
    m.outputs.push_back(out);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variance of sequences in arithmetic progressions: identities, circle-method chains, experiments"};
  app.require_subcommand(1);
  unsigned threads = 0;
  std::string out_dir = "apvar-out";
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");
  app.add_option("--out-dir", out_dir, "Directory for reports and the run manifest");

  RunManifest manifest;

  // verify
  auto* verify = app.add_subcommand("verify", "Run a property suite; exit 0 iff every check passes");
  std::string suite_name = "all";
  bool inject_fault = false;
  verify->add_option("suite", suite_name, "identities | euler | windows | all")
      ->check(CLI::IsMember({"identities", "euler", "windows", "all"}));
  verify->add_flag("--inject-fault", inject_fault)->group("");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Run a full lower-bound chain and write reports");
  std::string theorem = "theorem1";
  double n_flag = 1e5, q_exp = 0.75, eps = 0.05, delta = 0.1, k_exp = -1, r_flag = -1;
  int k = 2;
  std::int64_t t_flag = 0;
  std::string ending = "second", format = "json";
  experiment->add_option("kind", theorem, "theorem1 | theorem2")->check(CLI::IsMember({"theorem1", "theorem2"}));
  experiment->add_option("--N", n_flag, "Sequence length (accepts 1e5)");
  experiment->add_option("--Q-exp", q_exp, "Q = N^Q-exp");
  experiment->add_option("--k", k, "Divisor function order (theorem2)");
  experiment->add_option("--delta", delta, "theorem2 range parameter");
  experiment->add_option("--epsilon", eps, "Window and range parameter");
  experiment->add_option("--K-exp", k_exp, "Override K = (log N)^K-exp");
  experiment->add_option("--R", r_flag, "Override R");
  experiment->add_option("--T", t_flag, "Spectrum grid size (power of two)");
  experiment->add_option("--ending", ending, "first | second")->check(CLI::IsMember({"first", "second"}));
  experiment->add_option("--format", format, "stdout format")->check(CLI::IsMember({"json", "csv"}));

  // table
  auto* table = app.add_subcommand("table", "Deterministic CSV tables");
  std::string what = "ramanujan", seq_name = "d2", kind = "prime", out;
  std::int64_t q_max = 12, n_max = 12;
  double t_n = 1000, t_r = 100;
  int t_k = 2;
  std::string t_format = "csv";
  table->add_option("what", what, "ramanujan | variance | weights | residues")
      ->check(CLI::IsMember({"ramanujan", "variance", "weights", "residues"}));
  table->add_option("--q-max", q_max, "Largest modulus");
  table->add_option("--n-max", n_max, "Largest n (ramanujan)");
  table->add_option("--seq", seq_name, "lambda | d2 | d3 | d4 | file:<path>");
  table->add_option("--N", t_n, "Sequence length or residue cutoff");
  table->add_option("--kind", kind, "prime | divisor")->check(CLI::IsMember({"prime", "divisor"}));
  table->add_option("--R", t_r, "Weight cutoff");
  table->add_option("--k", t_k, "Divisor order");
  table->add_option("--format", t_format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  table->add_option("--out", out, "Output file (default stdout)");

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "Power spectrum and arc-grid export");
  auto* sp_export = spectrum->add_subcommand("export", "Write |A(t/T)|^2 as little-endian binary");
  auto* sp_arcs = spectrum->add_subcommand("arcs", "Write the major/minor arc grid as run-length JSON");
  spectrum->require_subcommand(1);
  std::string sp_seq = "lambda", sp_out;
  double sp_n = 1e4, sp_q_exp = 0.75, sp_k = 5, sp_q0 = -1;
  std::int64_t sp_t = 0;
  for (auto* c : {sp_export, sp_arcs}) {
    c->add_option("--N", sp_n, "Sequence length");
    c->add_option("--T", sp_t, "Grid size (power of two)");
    c->add_option("--out", sp_out, "Output file")->required();
  }
  sp_export->add_option("--seq", sp_seq, "lambda | d2 | d3 | d4 | file:<path>");
  sp_arcs->add_option("--Q-exp", sp_q_exp, "Q = N^Q-exp");
  sp_arcs->add_option("--K", sp_k, "Arc width parameter K");
  sp_arcs->add_option("--Q0", sp_q0, "Q0 (default N log N / Q)");

  // sieve
  auto* sieve = app.add_subcommand("sieve", "Sieve Lambda, mu, phi, d_k up to N (cached under APVAR_CACHE_DIR)");
  double sv_n = 1e6;
  int sv_k = 2;
  sieve->add_option("--N", sv_n, "Upper limit");
  sieve->add_option("--k", sv_k, "Largest divisor order");

  // query
  auto* query = app.add_subcommand("query", "Single quantities: V(q), H(q), c_q(n)");
  std::string qy_what = "variance", qy_seq = "d2";
  double qy_n = 1000;
  std::int64_t qy_q = 12, qy_arg = 1;
  query->add_option("what", qy_what, "variance | H | ramanujan")->check(CLI::IsMember({"variance", "H", "ramanujan"}));
  query->add_option("--seq", qy_seq, "Sequence");
  query->add_option("--N", qy_n, "Sequence length");
  query->add_option("--q", qy_q, "Modulus");
  query->add_option("--n", qy_arg, "Argument n (ramanujan)");

  CLI11_PARSE(app, argc, argv);
  set_thread_count(threads);
  const auto cache = SieveCache::from_env();

  try {
    if (*verify) {
      manifest.command = "verify " + suite_name;
      manifest.config = {{"suite", suite_name}, {"inject_fault", inject_fault}};
      VerifyOptions opt;
      opt.inject_fault = inject_fault;
      const auto res = run_suite(parse_suite(suite_name), opt);
      for (const auto& c : res.checks) {
        std::cout << (c.ok ? "PASS " : "FAIL ") << c.name;
        if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
        std::cout << '\n';
      }
      manifest.exit_code = res.ok() ? 0 : 1;
    } else if (*experiment) {
      manifest.command = "experiment " + theorem;
      if (!(q_exp > 0.0 && q_exp <= 1.0)) {
        throw PreconditionError("--Q-exp must lie in (0, 1] so that Q <= N (got " + fmt(q_exp) + ")");
      }
      const double q = std::pow(n_flag, q_exp);
      ExperimentConfig cfg = theorem == "theorem1"
                                 ? theorem1_config(n_flag, q, eps)
                                 : theorem2_config(n_flag, q, k, delta, ending == "first" ? Ending::kFirst : Ending::kSecond, eps);
      if (k_exp >= 0) {
        const double kv = std::pow(std::log(n_flag), k_exp);
        cfg.clips.push_back("K: override " + fmt(cfg.K) + " -> " + fmt(kv));
        cfg.K = kv;
      }
      if (r_flag > 0) {
        cfg.clips.push_back("R: override " + fmt(cfg.R) + " -> " + fmt(r_flag));
        cfg.R = r_flag;
      }
      cfg.T = t_flag;
      manifest.config = cfg.to_json();
      const auto rep = theorem == "theorem1" ? run_theorem1(cfg) : run_theorem2(cfg);
      fs::create_directories(out_dir);
      const std::string stem = theorem + (theorem == "theorem2" ? "_" + ending : std::string());
      const auto json_path = (fs::path(out_dir) / ("report_" + stem + ".json")).string();
      const auto csv_path = (fs::path(out_dir) / ("summary_" + stem + ".csv")).string();
      const auto plot_path = (fs::path(out_dir) / ("plot_" + stem + ".csv")).string();
      const auto report_json = rep.to_json().dump(2) + "\n";
      std::ofstream(json_path) << report_json;
      const std::string csv = rep.csv_header() + "\n" + rep.csv_row() + "\n";
      std::ofstream(csv_path) << csv;
      {
        std::ofstream os(plot_path);
        os << rep.plot_header << '\n';
        for (const auto& [x, y] : rep.plot) os << fmt(x) << ',' << fmt(y) << '\n';
      }
      manifest.outputs = {json_path, csv_path, plot_path};
      std::cout << (format == "json" ? report_json : csv);
    } else if (*table) {
      manifest.command = "table " + what;
      std::ostringstream os;
      if (what == "ramanujan") {
        require(q_max >= 1 && n_max >= 1 && q_max * n_max <= 10'000'000, "ramanujan table: need 1 <= q-max, n-max and q-max * n-max <= 1e7");
        manifest.config = {{"q_max", q_max}, {"n_max", n_max}};
        os << "q,n,c_q(n)\n";
        for (std::int64_t qq = 1; qq <= q_max; ++qq)
          for (std::int64_t nn = 1; nn <= n_max; ++nn) os << qq << ',' << nn << ',' << ramanujan_sum(qq, nn) << '\n';
      } else if (what == "variance") {
        const auto seq = load_sequence(seq_name, static_cast<std::int64_t>(t_n), cache);
        require(q_max >= 1 && q_max <= seq.size(), "variance table: need 1 <= q-max <= N");
        manifest.config = {{"seq", seq_name}, {"N", seq.size()}, {"q_max", q_max}};
        std::vector<VarianceReport> rows(static_cast<std::size_t>(q_max));
        parallel_for(1, q_max + 1, [&](std::int64_t qq) { rows[static_cast<std::size_t>(qq - 1)] = variance_mod_q(seq, qq); });
        if (t_format == "json") {
          json arr = json::array();
          for (const auto& r : rows) arr.push_back(r.to_json());
          os << arr.dump(2) << '\n';
        } else {
          os << "q,V\n";
          for (const auto& r : rows) os << r.q << ',' << (r.exact ? r.exact->str() : fmt(r.value)) << '\n';
        }
      } else if (what == "weights") {
        const auto w = build_weights(kind == "prime" ? WeightKind::kPrimeSieve : WeightKind::kDivisor, t_r, t_k);
        manifest.config = {{"kind", kind}, {"R", t_r}, {"k", t_k}};
        w.write_csv(os);
      } else {
        require(q_max >= 1 && q_max <= 100000, "residues table: need 1 <= q-max <= 1e5");
        manifest.config = {{"k", t_k}, {"N", t_n}, {"q_max", q_max}};
        std::vector<ResiduePrediction> preds(static_cast<std::size_t>(q_max));
        parallel_for(1, q_max + 1, [&](std::int64_t qq) {
          preds[static_cast<std::size_t>(qq - 1)] = residue_dk_correlation(qq, t_k, t_n);
        });
        if (t_format == "json") {
          json arr = json::array();
          for (std::int64_t qq = 1; qq <= q_max; ++qq) {
            const auto& p = preds[static_cast<std::size_t>(qq - 1)];
            arr.push_back({{"q", qq}, {"k", t_k}, {"N", t_n}, {"value", p.value}, {"error", p.error}});
          }
          os << arr.dump(2) << '\n';
        } else {
          os << "q,k,N,value,error\n";
          for (std::int64_t qq = 1; qq <= q_max; ++qq) {
            const auto& p = preds[static_cast<std::size_t>(qq - 1)];
            os << qq << ',' << t_k << ',' << fmt(t_n) << ',' << fmt(p.value) << ',' << fmt(p.error) << '\n';
          }
        }
      }
      emit(os.str(), out, manifest);
    } else if (*spectrum) {
      const auto n = static_cast<std::int64_t>(sp_n);
      const auto T = sp_t > 0 ? sp_t : default_grid_size(n);
      if (*sp_export) {
        manifest.command = "spectrum export";
        const auto seq = load_sequence(sp_seq, n, cache);
        manifest.config = {{"seq", sp_seq}, {"N", seq.size()}, {"T", T}};
        build_spectrum(seq, T).export_binary(sp_out);
      } else {
        manifest.command = "spectrum arcs";
        const double q = std::pow(sp_n, sp_q_exp);
        const double q0 = sp_q0 > 0 ? sp_q0 : std::max(1.0, sp_n * std::log(sp_n) / q);
        const ArcSystem arcs{sp_k, q0, q, n};
        manifest.config = {{"N", n}, {"T", T}, {"arcs", arcs.to_json()}};
        const auto grid = classify_arcs(arcs, T);
        std::ofstream(sp_out) << grid.to_rle_json().dump() << '\n';
      }
      manifest.outputs.push_back(sp_out);
    } else if (*sieve) {
      manifest.command = "sieve";
      const auto n = static_cast<std::int64_t>(sv_n);
      manifest.config = {{"N", n}, {"k", sv_k}, {"cache", cache.enabled() ? cache.path(n, sv_k) : ""}};
      const auto t = cache.get(n, sv_k);
      double psi = 0.0;
      for (std::int64_t i = 1; i <= n; ++i) psi += t.von_mangoldt(i);
      json j = {{"N", n}, {"k", sv_k}, {"psi", psi}, {"psi_over_N", psi / static_cast<double>(n)}};
      for (int jj = 2; jj <= sv_k; ++jj) {
        double s = 0.0;
        for (std::int64_t i = 1; i <= n; ++i) s += static_cast<double>(t.divisor_k(jj, i));
        j["sum_d" + std::to_string(jj)] = s;
      }
      std::cout << j.dump(2) << '\n';
      if (cache.enabled()) manifest.outputs.push_back(cache.path(n, sv_k));
    } else if (*query) {
      manifest.command = "query " + qy_what;
      json j;
      if (qy_what == "ramanujan") {
        j = {{"q", qy_q}, {"n", qy_arg}, {"c_q(n)", ramanujan_sum(qy_q, qy_arg)}};
      } else {
        const auto seq = load_sequence(qy_seq, static_cast<std::int64_t>(qy_n), cache);
        if (qy_what == "variance") {
          j = variance_mod_q(seq, qy_q).to_json();
        } else {
          const auto h = exp_variance_H(seq, qy_q);
          j = {{"q", qy_q}, {"H", h.value}};
          if (h.exact) j["H_exact"] = h.exact->str();
        }
      }
      manifest.config = {{"what", qy_what}, {"seq", qy_seq}, {"N", qy_n}, {"q", qy_q}};
      std::cout << j.dump(2) << '\n';
    }
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    manifest.exit_code = 2;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    manifest.exit_code = 3;
  } catch (const AccuracyError& e) {
    std::cerr << "accuracy error: " << e.what() << '\n';
    manifest.exit_code = 4;
  }
  manifest.write(out_dir);
  return manifest.exit_code;
}
