#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "ipdsaw/analytic.hpp"
#include "ipdsaw/exact_engine.hpp"
#include "ipdsaw/monte_carlo.hpp"
#include "ipdsaw/numerics.hpp"
#include "ipdsaw/phase_diagram.hpp"
#include "ipdsaw/verify.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace ipdsaw;

namespace {

constexpr const char* kVersion = "ipdsaw 1.0.0";
constexpr int kExitDomain = 2;

// Raised for malformed run configurations; reported like a domain error.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json optional_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_manifest(const fs::path& path, const std::string& command, const json& params,
                    const std::vector<std::string>& outputs) {
  json m;
  m["tool"] = kVersion;
  m["command"] = command;
  m["parameters"] = params;
  m["outputs"] = outputs;
  std::ofstream(path) << m.dump(2) << "\n";
}

// Writes to a temporary sibling and renames, so a partially written file is
// never left under the final name.
void write_atomically(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    os << text;
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// phase

struct PhaseArgs {
  double beta = 0.0;
  double delta = 0.0;
  bool as_json = false;
};

int cmd_phase(const PhaseArgs& a) {
  const RegimePoint p = classify_phase(a.beta, a.delta);
  const bool collapsed_side = a.beta > beta_c();
  double dc = NAN, dbar = NAN, dcheck = NAN, g = NAN;
  if (collapsed_side) {
    dc = delta_c_explicit(a.beta);
    dbar = delta_bar(a.beta);
    dcheck = delta_check(a.beta);
  }
  if (p.phase == Phase::Collapsed) {
    try {
      g = surface_free_energy(a.beta, a.delta);
    } catch (const RegimeError&) {
      g = NAN;  // outside the set where the variational formula holds
    }
  }
  const bool in_cbad = collapsed_side && a.delta > a.beta / 2 && a.delta > dbar && a.delta < a.beta;
  if (a.as_json) {
    json j;
    j["beta"] = a.beta;
    j["delta"] = a.delta;
    j["phase"] = to_string(p.phase);
    j["regime"] = p.regime ? json(to_string(*p.regime)) : json(nullptr);
    j["in_good_set"] = p.in_good_set;
    j["in_cbad"] = in_cbad;
    j["f0"] = p.f0;
    j["delta_c"] = optional_number(dc);
    j["delta_bar"] = optional_number(dbar);
    j["delta_check"] = optional_number(dcheck);
    j["g"] = optional_number(g);
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  auto show = [](double v) { return std::isfinite(v) ? fmt::format("{:.12g}", v) : std::string("undefined"); };
  fmt::print("beta: {:.12g}\ndelta: {:.12g}\n", a.beta, a.delta);
  fmt::print("phase: {}\n", to_string(p.phase));
  fmt::print("regime: {}\n", p.regime ? to_string(*p.regime) : std::string("none"));
  fmt::print("in_good_set: {}\nin_cbad: {}\n", p.in_good_set, in_cbad);
  fmt::print("f0: {:.12g}\n", p.f0);
  fmt::print("delta_c: {}\ndelta_bar: {}\ndelta_check: {}\ng: {}\n", show(dc), show(dbar),
             show(dcheck), show(g));
  return 0;
}

// ---------------------------------------------------------------------------
// curves

struct CurvesArgs {
  double beta_min = 1.25;
  double beta_max = 5.0;
  double step = 0.05;
  std::string out = ".";
  bool plot_script = false;
};

std::string csv_number(double v) { return std::isfinite(v) ? fmt::format("{:.17g}", v) : "nan"; }

int cmd_curves(const CurvesArgs& a) {
  if (!(a.step > 0.0) || !(a.beta_max >= a.beta_min) || !(a.beta_min > 0.0)) {
    throw DomainError("curves needs 0 < beta-min <= beta-max and step > 0");
  }
  const std::vector<CurveRow> rows = critical_curves(a.beta_min, a.beta_max, a.step);
  fs::create_directories(a.out);
  std::ostringstream csv;
  csv << "beta,delta_c,delta_bar,delta_check,f0,in_cbad_band\n";
  for (const CurveRow& r : rows) {
    csv << fmt::format("{},{},{},{},{},{}\n", csv_number(r.beta), csv_number(r.delta_c),
                       csv_number(r.delta_bar), csv_number(r.delta_check), csv_number(r.f0),
                       r.in_cbad_band ? 1 : 0);
  }
  const fs::path csv_path = fs::path(a.out) / "curves.csv";
  write_atomically(csv_path, csv.str());
  std::vector<std::string> outputs{csv_path.string()};
  if (a.plot_script) {
    const fs::path gp = fs::path(a.out) / "curves.gp";
    std::ostringstream s;
    s << "set datafile separator ','\n"
      << "set key top left\n"
      << "set xlabel 'beta'\nset ylabel 'delta'\n"
      << "set style fill transparent solid 0.3\n"
      << "plot 'curves.csv' every ::1 using 1:3:1 with filledcurves lc rgb 'grey' title 'C_bad', \\\n"
      << "     '' every ::1 using 1:2 with lines lw 2 title 'delta_c', \\\n"
      << "     '' every ::1 using 1:4 with lines lw 2 title 'delta_check', \\\n"
      << "     '' every ::1 using 1:1 with lines dt 2 title 'delta = beta', \\\n"
      << "     '' every ::1 using 1:5 with lines dt 3 title 'f(beta,0)'\n";
    write_atomically(gp, s.str());
    outputs.push_back(gp.string());
  }
  json params{{"beta_min", a.beta_min}, {"beta_max", a.beta_max}, {"step", a.step},
              {"out", a.out}, {"plot_script", a.plot_script}};
  write_manifest(fs::path(a.out) / "curves_manifest.json", "curves", params, outputs);
  fmt::print("wrote {} rows to {}\n", rows.size(), csv_path.string());
  return 0;
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(const std::string& level) {
  VerifyLevel lv;
  if (level == "fast") {
    lv = VerifyLevel::Fast;
  } else if (level == "full") {
    lv = VerifyLevel::Full;
  } else {
    throw DomainError("verify level must be fast or full");
  }
  const std::vector<CheckResult> results = run_verify(lv);
  std::vector<std::string> failed;
  for (const CheckResult& r : results) {
    fmt::print("{} {:<22} {:>7.3f}s  {}\n", r.pass ? "PASS" : "FAIL", r.name, r.seconds, r.detail);
    if (!r.pass) failed.push_back(r.name);
  }
  if (failed.empty()) {
    fmt::print("all {} checks passed\n", results.size());
    return 0;
  }
  std::string names;
  for (const std::string& n : failed) names += (names.empty() ? "" : ", ") + n;
  fmt::print(stderr, "failed checks: {}\n", names);
  return 1;
}

// ---------------------------------------------------------------------------
// dn-study

struct DnArgs {
  double beta = 2.0;
  double delta = 0.0;
  double q = 1.0;
  std::vector<int> n_list;
  std::string out;
};

int cmd_dn_study(const DnArgs& a) {
  if (a.n_list.empty()) throw DomainError("dn-study needs at least one N");
  std::ostringstream csv;
  csv << "N,area,logD_exact,logD_pred,ratio,regime\n";
  std::vector<std::string> notes;
  for (int n : a.n_list) {
    if (n < 1) throw DomainError("dn-study needs N >= 1");
    const double area_real = a.q * n * n;
    const long area = std::lround(area_real);
    if (std::abs(area_real - static_cast<double>(area)) > 1e-9 * std::max(1.0, area_real)) {
      notes.push_back(fmt::format("N={} skipped: q N^2 = {:.6g} is not an integer", n, area_real));
      continue;
    }
    const AuxCount c = aux_D_asymptotic(n, area, a.beta, a.delta);
    csv << fmt::format("{},{},{:.17g},{:.17g},{:.17g},{}\n", n, area, c.exact.log(), c.log_pred,
                       std::exp(c.log_ratio), to_string(c.regime));
  }
  if (a.out.empty()) {
    std::cout << csv.str();
  } else {
    const fs::path dir(a.out);
    fs::create_directories(dir);
    write_atomically(dir / "dn_study.csv", csv.str());
    json params{{"beta", a.beta}, {"delta", a.delta}, {"q", a.q}, {"n", a.n_list}, {"out", a.out}};
    write_manifest(dir / "dn_study_manifest.json", "dn-study", params,
                   {(dir / "dn_study.csv").string()});
  }
  for (const std::string& note : notes) fmt::print(stderr, "note: {}\n", note);
  return 0;
}

// ---------------------------------------------------------------------------
// sample

template <class T>
T required(const json& cfg, const char* key) {
  if (!cfg.contains(key)) throw ConfigError(std::string("missing config key: ") + key);
  try {
    return cfg.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key has the wrong type: ") + key);
  }
}

template <class T>
T optional(const json& cfg, const char* key, T fallback) {
  if (!cfg.contains(key)) return fallback;
  try {
    return cfg.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key has the wrong type: ") + key);
  }
}

int cmd_sample(const std::string& config_path, const std::string& out) {
  std::ifstream is(config_path);
  if (!is) throw ConfigError("cannot open config file " + config_path);
  json cfg;
  try {
    cfg = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ChainConfig c;
  c.L = required<int>(cfg, "L");
  c.beta = required<double>(cfg, "beta");
  c.delta = required<double>(cfg, "delta");
  c.samples = required<long>(cfg, "samples");
  c.seed = required<std::uint64_t>(cfg, "seed");
  c.burn_in_sweeps = optional<long>(cfg, "burn_in_sweeps", c.burn_in_sweeps);
  c.thinning_sweeps = optional<long>(cfg, "thinning_sweeps", c.thinning_sweeps);
  c.profile_bins = optional<int>(cfg, "profile_bins", c.profile_bins);
  if (cfg.contains("moves")) {
    const json& m = cfg.at("moves");
    c.moves.transfer = optional<double>(m, "transfer", c.moves.transfer);
    c.moves.flip = optional<double>(m, "flip", c.moves.flip);
    c.moves.split_merge = optional<double>(m, "split_merge", c.moves.split_merge);
  }

  const ObservableTrace trace = mcmc_run(c);
  const Stationarity st = energy_stationarity(trace);
  std::vector<double> l1(trace.abs_l1.begin(), trace.abs_l1.end());
  const MeanEstimate l1_mean = batch_means(l1);
  const MeanEstimate e_mean = batch_means(trace.energy);

  const fs::path dir(out);
  fs::create_directories(dir);
  std::ostringstream csv;
  write_trace_csv(csv, trace);
  write_atomically(dir / "trace.csv", csv.str());

  json params{{"L", c.L},
              {"beta", c.beta},
              {"delta", c.delta},
              {"samples", c.samples},
              {"seed", c.seed},
              {"burn_in_sweeps", c.burn_in_sweeps},
              {"thinning_sweeps", c.thinning_sweeps},
              {"profile_bins", c.profile_bins},
              {"moves", {{"transfer", c.moves.transfer},
                         {"flip", c.moves.flip},
                         {"split_merge", c.moves.split_merge}}},
              {"config_file", config_path}};
  json m;
  m["tool"] = kVersion;
  m["command"] = "sample";
  m["parameters"] = params;
  m["outputs"] = {(dir / "trace.csv").string()};
  m["diagnostics"] = {{"proposals", trace.proposals},
                      {"accepted", trace.accepted},
                      {"acceptance_rate", trace.proposals > 0
                                              ? static_cast<double>(trace.accepted) / trace.proposals
                                              : 0.0},
                      {"energy_stationarity_z", st.z},
                      {"energy_stationary", st.ok},
                      {"energy_tau", e_mean.tau},
                      {"abs_l1_mean", l1_mean.mean},
                      {"abs_l1_stderr", l1_mean.stderr_},
                      {"abs_l1_tau", l1_mean.tau}};
  write_atomically(dir / "manifest.json", m.dump(2) + "\n");
  fmt::print("wrote {} samples to {}\n", trace.energy.size(), (dir / "trace.csv").string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase diagram, exact enumeration and sampling tools for the wall-pinned IPDSAW"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  PhaseArgs phase_args;
  auto* phase = app.add_subcommand("phase", "Classify (beta, delta) and print the critical curves there");
  phase->add_option("--beta", phase_args.beta, "Self-attraction strength")->required();
  phase->add_option("--delta", phase_args.delta, "Wall pinning strength")->required();
  phase->add_flag("--json", phase_args.as_json, "Emit JSON");

  CurvesArgs curves_args;
  auto* curves = app.add_subcommand("curves", "Tabulate delta_c, delta_bar, delta_check and f(beta,0)");
  curves->add_option("--beta-min", curves_args.beta_min, "First beta")->required();
  curves->add_option("--beta-max", curves_args.beta_max, "Last beta")->required();
  curves->add_option("--step", curves_args.step, "Grid step")->required();
  curves->add_option("--out", curves_args.out, "Output directory")->required();
  curves->add_flag("--plot-script", curves_args.plot_script, "Also write a gnuplot script");

  std::string verify_level = "fast";
  auto* verify = app.add_subcommand("verify", "Run the cross-module identity suites");
  verify->add_option("--level", verify_level, "fast or full")
      ->check(CLI::IsMember({"fast", "full"}));

  DnArgs dn_args;
  auto* dn = app.add_subcommand("dn-study", "Exact versus predicted auxiliary partition functions");
  dn->add_option("--beta", dn_args.beta, "Self-attraction strength")->required();
  dn->add_option("--delta", dn_args.delta, "Wall pinning strength")->required();
  dn->add_option("--q", dn_args.q, "Area per N^2")->required();
  dn->add_option("--n", dn_args.n_list, "Comma-separated N values")->required()->delimiter(',');
  dn->add_option("--out", dn_args.out, "Output directory (stdout if omitted)");

  std::string sample_config, sample_out = ".";
  auto* sample = app.add_subcommand("sample", "Run the Metropolis sampler from a JSON config");
  sample->add_option("--config", sample_config, "JSON config file")->required();
  sample->add_option("--out", sample_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*phase) return cmd_phase(phase_args);
    if (*curves) return cmd_curves(curves_args);
    if (*verify) return cmd_verify(verify_level);
    if (*dn) return cmd_dn_study(dn_args);
    if (*sample) return cmd_sample(sample_config, sample_out);
  } catch (const ConfigError& e) {
    fmt::print(stderr, "{}\n", json{{"error", "config"}, {"message", e.what()}}.dump());
    return kExitDomain;
  } catch (const std::domain_error& e) {
    // DomainError and RegimeError
    fmt::print(stderr, "{}\n", json{{"error", "domain"}, {"message", e.what()}}.dump());
    return kExitDomain;
  } catch (const std::exception& e) {
    fmt::print(stderr, "{}\n", json{{"error", "runtime"}, {"message", e.what()}}.dump());
    return 1;
  }
  return 0;
}
