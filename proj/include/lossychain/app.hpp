// Copyright 2026 The lossychain Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOSSYCHAIN_APP_HPP
#define LOSSYCHAIN_APP_HPP

// Experiment runner shared by the command-line tool and the tests.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bands.hpp"
#include "config.hpp"
#include "core.hpp"
#include "lattice.hpp"
#include "manybody.hpp"
#include "propagator.hpp"
#include "semiclassics.hpp"
#include "spectral.hpp"

namespace lossychain::app {

inline constexpr const char* version = "0.1.0";

enum ExitCode : int {
  ok = 0,
  unknown_subcommand = 2,
  invalid_parameter = 3,
  module_error = 4,
  io_error = 5,
};

struct OptionSpec {
  std::string key;
  std::string default_value;
  std::string help;
};

struct CommandSpec {
  std::string name;
  std::string help;
  std::vector<OptionSpec> options;
};

inline const std::string sqrt20 = "4.4721359549995796";

inline const std::vector<CommandSpec>& command_specs() {
  static const std::vector<CommandSpec> specs = {
      {"spectrum",
       "converged eigenvalues of H_eff and their two-ladder labels over a gamma grid",
       {{"F", "0.3", "static tilt"},
        {"gamma", "0.2", "decay rate (ignored when gamma_sweep is set)"},
        {"gamma_sweep", "", "gamma grid a:b:step"},
        {"L_small", "50", "half width of the smaller lattice"},
        {"L_large", "60", "half width of the larger lattice"},
        {"tol", "1e-8", "eigenvalue matching tolerance"},
        {"ladder_tol", "1e-6", "tolerance of the ladder extraction"}}},
      {"evolve",
       "single-particle or mean-field lattice dynamics",
       {{"mode", "sp", "sp | mf"},
        {"L", "60", "half width"},
        {"F", "0.2", "static tilt"},
        {"gamma", "0.05", "uniform decay rate"},
        {"gamma_pattern", "uniform", "uniform | random"},
        {"gamma_random", "", "lo,hi interval of random odd-site rates"},
        {"seed", "1", "random seed"},
        {"g", "0", "mean-field interaction"},
        {"init", "gaussian:0,0," + sqrt20,
         "delta:j | gaussian:x0,k0,sigma | nlbloch:lower|upper,k,x0,sigma"},
        {"t_final", "1T", "final time (suffix T = Bloch periods)"},
        {"dt_out", "0.015625T", "sampling interval"},
        {"rtol", "1e-11", "relative tolerance"},
        {"atol", "1e-13", "absolute tolerance"}}},
      {"bands",
       "linear dispersion E_+-(k)",
       {{"gamma", "0.05", "decay rate"}, {"nk", "801", "number of k points on [-pi, pi]"}}},
      {"nlbands",
       "nonlinear Bloch bands",
       {{"g", "2", "interaction"}, {"gamma", "0.1", "decay rate"}, {"nk", "801", "k points"}}},
      {"bdg",
       "Bogoliubov-de Gennes stability of the nonlinear Bloch states",
       {{"g", "2", "interaction"},
        {"gamma", "0.1", "decay rate"},
        {"nk", "801", "k points"},
        {"k_values", "", "explicit comma separated k list (overrides nk)"}}},
      {"semiclassics",
       "single-band Gaussian packet dynamics",
       {{"F", "0.2", "static tilt"},
        {"gamma", "0.05", "decay rate"},
        {"band", "minus", "plus | minus"},
        {"q0", "0", "initial position"},
        {"p0", "0", "initial momentum"},
        {"sigma", "1e6", "packet width (sets the covariance unless given)"},
        {"sigma_qq", "", "covariance override"},
        {"sigma_qp", "", "covariance override"},
        {"sigma_pp", "", "covariance override"},
        {"t_final", "1T", "final time"},
        {"dt_out", "0.005T", "sampling interval"}}},
      {"lz",
       "Landau-Zener estimate against the measured band transfer",
       {{"F", "0.1,0.2,0.5", "tilts"},
        {"gamma", "0,0.05,0.1,0.2,0.4", "decay rates"},
        {"sigma", sqrt20, "packet width"},
        {"L", "auto", "half width (auto = ceil(4/F) + 25)"},
        {"measure", "true", "run the lattice measurement"}}},
      {"manybody",
       "Lindblad dynamics for up to two bosons",
       {{"N", "2", "particle number of the initial BEC (and N_max)"},
        {"U", "1", "on-site interaction"},
        {"L", "20", "half width"},
        {"F", "0.2", "static tilt"},
        {"gamma", "0.1", "decay rate"},
        {"init", "nlbloch:lower,0,0," + sqrt20, "single-particle orbital of the BEC"},
        {"t_final", "1.5T", "final time"},
        {"dt_out", "0.015625T", "sampling interval"},
        {"engine", "auto", "auto | direct | sector"},
        {"rtol", "1e-12", "relative tolerance"},
        {"atol", "1e-15", "absolute tolerance"}}},
  };
  return specs;
}

inline const CommandSpec* find_command(const std::string& name) {
  for (const auto& c : command_specs())
    if (c.name == name) return &c;
  return nullptr;
}

class UnknownCommand : public Error {
 public:
  using Error::Error;
};

/// Fills defaults and rejects unknown keys. out_dir is accepted everywhere.
inline ExperimentConfig resolve(const ExperimentConfig& in) {
  const CommandSpec* spec = find_command(in.command);
  if (!spec) throw UnknownCommand("unknown subcommand '" + in.command + "'");
  ExperimentConfig out;
  out.command = in.command;
  std::set<std::string> known{"out_dir"};
  for (const auto& o : spec->options) {
    known.insert(o.key);
    out.params[o.key] = o.default_value;
  }
  out.params["out_dir"] = ".";
  for (const auto& [k, v] : in.params) {
    if (!known.count(k)) throw ParameterError("unknown parameter '" + k + "' for " + in.command);
    out.params[k] = v;
  }
  if (out.command == "evolve" && !out.params["gamma_random"].empty())
    out.params["gamma_pattern"] = "random";
  return out;
}

// ---------------------------------------------------------------------------
// output

inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const ExperimentConfig& cfg,
            const std::vector<std::string>& columns)
      : path_(path), out_(path) {
    if (!out_) throw IoError("cannot write '" + path.string() + "'", path.string());
    out_ << "#! lossychain " << version << '\n' << config::serialize(cfg, "# ");
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << '\n';
  }

  template <class... T>
  void row(const T&... fields) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(fields), first = false), ...);
    out_ << '\n';
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  static std::string cell(double x) { return fmt(x); }
  static std::string cell(int x) { return std::to_string(x); }
  static std::string cell(long long x) { return std::to_string(x); }
  static std::string cell(std::size_t x) { return std::to_string(x); }
  static std::string cell(bool x) { return x ? "true" : "false"; }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }

  std::filesystem::path path_;
  std::ofstream out_;
};

inline void write_json(const std::filesystem::path& path, const ExperimentConfig& cfg,
                       nlohmann::ordered_json body) {
  nlohmann::ordered_json j;
  j["generator"] = std::string("lossychain ") + version;
  j["config"]["command"] = cfg.command;
  for (const auto& [k, v] : cfg.params) j["config"][k] = v;
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  std::ofstream f(path);
  if (!f) throw IoError("cannot write '" + path.string() + "'", path.string());
  f << j.dump(2) << '\n';
}

struct RunResult {
  int exit_code = ok;
  std::vector<std::string> files;
  std::string error_record;  // JSON, empty on success
};

// ---------------------------------------------------------------------------
// parameter helpers

struct Params {
  const ExperimentConfig& cfg;
  const std::string& str(const std::string& k) const { return cfg.at(k); }
  double num(const std::string& k) const { return config::to_double(k, str(k)); }
  int integer(const std::string& k) const {
    const long long v = config::to_int(k, str(k));
    if (v < -1000000000LL || v > 1000000000LL) throw ParameterError("'" + k + "' out of range");
    return static_cast<int>(v);
  }
  double time(const std::string& k, double F) const { return config::to_time(k, str(k), F); }
};

inline double nonneg(double v, const char* what) {
  if (!(v >= 0.0)) throw ParameterError(std::string(what) + " must be >= 0");
  return v;
}

/// Single-particle initial state grammar.
inline WaveFunction parse_initial_state(const LatticeSpec& spec, const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw ParameterError("invalid init '" + s + "'");
  const std::string kind = s.substr(0, colon);
  const auto args = config::split(s.substr(colon + 1), ',');
  if (kind == "delta") {
    if (args.size() != 1) throw ParameterError("delta:j expects one site");
    return make_delta(spec, static_cast<int>(config::to_int("init", args[0])));
  }
  if (kind == "gaussian") {
    if (args.size() != 3) throw ParameterError("gaussian:x0,k0,sigma expects three values");
    return make_gaussian(spec, {config::to_double("init", args[0]),
                                config::to_double("init", args[1]),
                                config::to_double("init", args[2])});
  }
  if (kind == "nlbloch") {
    if (args.size() != 4) throw ParameterError("nlbloch:band,k,x0,sigma expects four values");
    if (args[0] != "lower" && args[0] != "upper")
      throw ParameterError("nlbloch band must be lower or upper");
    return make_nonlinear_bloch_packet(spec, args[0] == "upper", config::to_double("init", args[1]),
                                       config::to_double("init", args[2]),
                                       config::to_double("init", args[3]));
  }
  throw ParameterError("unknown init kind '" + kind + "'");
}

inline ode::Options ode_options(const Params& p) {
  ode::Options o;
  o.rtol = p.num("rtol");
  o.atol = p.num("atol");
  return o;
}

// ---------------------------------------------------------------------------
// commands

namespace commands {

inline void spectrum(const ExperimentConfig& cfg, const std::filesystem::path& dir, RunResult& r) {
  const Params p{cfg};
  const double F = p.num("F");
  if (!(F > 0.0)) throw ParameterError("F must be positive");
  const std::vector<double> gammas =
      p.str("gamma_sweep").empty() ? std::vector<double>{p.num("gamma")}
                                   : config::to_sweep("gamma_sweep", p.str("gamma_sweep"));
  const int Ls = p.integer("L_small"), Ll = p.integer("L_large");
  const double tol = p.num("tol"), ltol = p.num("ladder_tol");
  CsvWriter eig(dir / "spectrum.csv", cfg, {"gamma", "re_E", "im_E", "ladder_index"});
  CsvWriter lad(dir / "ladders.csv", cfg,
                {"gamma", "im_lambda", "im_ladder1", "n_converged", "max_re_residual"});
  for (double g : gammas) {
    const auto conv = converged_spectrum(LatticeSpec::uniform(Ll, F, nonneg(g, "gamma")), Ls, Ll, tol);
    if (conv.empty()) {
      lad.row(g, std::nan(""), std::nan(""), 0, std::nan(""));
      continue;
    }
    const LadderSpectrum ls = extract_ladders(conv, F, g, ltol);
    for (std::size_t i = 0; i < conv.size(); ++i)
      eig.row(g, conv[i].real(), conv[i].imag(), ls.labels[i]);
    lad.row(g, ls.im_lambda, -ls.im_lambda - 2.0 * g, conv.size(), ls.max_re_residual);
  }
  r.files = {eig.path().string(), lad.path().string()};
}

inline LatticeSpec evolve_lattice(const Params& p) {
  const int L = p.integer("L");
  const double F = nonneg(p.num("F"), "F");
  const double g = p.num("g");
  const std::string pattern = p.str("gamma_pattern");
  if (pattern == "random") {
    const auto lh = config::to_doubles("gamma_random", p.str("gamma_random"));
    if (lh.size() != 2) throw ParameterError("gamma_random expects lo,hi");
    const long long seed = config::to_int("seed", p.str("seed"));
    if (seed < 0) throw ParameterError("seed must be >= 0");
    return LatticeSpec::random_decay(L, F, lh[0], lh[1], static_cast<std::uint64_t>(seed), g);
  }
  if (pattern != "uniform") throw ParameterError("gamma_pattern must be uniform or random");
  return LatticeSpec::uniform(L, F, p.num("gamma"), g);
}

inline void evolve(const ExperimentConfig& cfg, const std::filesystem::path& dir, RunResult& r) {
  const Params p{cfg};
  const std::string mode = p.str("mode");
  if (mode != "sp" && mode != "mf") throw ParameterError("mode must be sp or mf");
  const LatticeSpec spec = evolve_lattice(p);
  const WaveFunction psi0 = parse_initial_state(spec, p.str("init"));
  const double t1 = p.time("t_final", spec.tilt()), dt = p.time("dt_out", spec.tilt());
  const DensityTrace tr = mode == "sp" ? evolve_single_particle(spec, psi0, t1, dt, ode_options(p))
                                       : evolve_mean_field(spec, psi0, t1, dt, ode_options(p));
  CsvWriter dens(dir / "density.csv", cfg, {"t", "j", "density", "renorm_density"});
  CsvWriter norms(dir / "norms.csv", cfg, {"t", "total_norm"});
  const int L = spec.half_width();
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    for (int j = -L; j <= L; ++j)
      dens.row(tr.times[i], j, tr.site_density(row, j + L), tr.renormalised_density(row, j + L));
    norms.row(tr.times[i], tr.total_norm[i]);
  }
  nlohmann::ordered_json body;
  body["boundary_spill"] = tr.boundary_spill;
  body["first_spill_time"] = tr.boundary_spill ? nlohmann::ordered_json(tr.first_spill_time) : nullptr;
  body["zero_norm_rows"] = tr.zero_norm_rows;
  body["decay"] = spec.decay();
  write_json(dir / "evolve.json", cfg, body);
  r.files = {dens.path().string(), norms.path().string(), (dir / "evolve.json").string()};
}

inline void bands(const ExperimentConfig& cfg, const std::filesystem::path& dir, RunResult& r) {
  const Params p{cfg};
  const double gamma = nonneg(p.num("gamma"), "gamma");
  const auto ks = uniform_k_grid(p.integer("nk"));
  CsvWriter out(dir / "bands.csv", cfg, {"k", "re_E_plus", "im_E_plus", "re_E_minus", "im_E_minus"});
  for (double k : ks) {
    const BandPoint b = dispersion(k, gamma);
    out.row(k, b.E_plus.real(), b.E_plus.imag(), b.E_minus.real(), b.E_minus.imag());
  }
  nlohmann::ordered_json body;
  body["exceptional_points"] = exceptional_points_linear(gamma);
  write_json(dir / "bands.json", cfg, body);
  r.files = {out.path().string(), (dir / "bands.json").string()};
}

inline void nlbands(const ExperimentConfig& cfg, const std::filesystem::path& dir, RunResult& r) {
  const Params p{cfg};
  const double g = nonneg(p.num("g"), "g"), gamma = nonneg(p.num("gamma"), "gamma");
  const auto pts = nonlinear_band_sweep(g, gamma, uniform_k_grid(p.integer("nk")));
  CsvWriter out(dir / "nlbands.csv", cfg,
                {"k", "family", "z", "v", "re_mu", "im_mu", "ep_class", "branch"});
  for (const auto& pt : pts)
    for (const auto& s : pt.solutions)
      out.row(pt.k, to_string(s.family), s.z, s.v, s.mu.real(), s.mu.imag(), to_string(s.ep_class),
              s.branch);
  r.files = {out.path().string()};
}

inline void bdg(const ExperimentConfig& cfg, const std::filesystem::path& dir, RunResult& r) {
  const Params p{cfg};
  const double g = nonneg(p.num("g"), "g"), gamma = nonneg(p.num("gamma"), "gamma");
  std::vector<NonlinearBandPoint> pts;
  if (!p.str("k_values").empty()) {
    for (double k : config::to_doubles("k_values", p.str("k_values")))
      pts.push_back(nonlinear_bloch_point(k, g, gamma));
  } else {
    pts = nonlinear_band_sweep(g, gamma, uniform_k_grid(p.integer("nk")));
  }
  CsvWriter out(dir / "bdg.csv", cfg,
                {"k", "family", "z", "max_im_omega", "stable", "branch", "re_mu", "im_mu"});
  CsvWriter om(dir / "bdg_omegas.csv", cfg,
               {"k", "family", "branch", "z", "re_omega", "im_omega"});
  for (const auto& pt : pts)
    for (const auto& s : pt.solutions) {
      const StabilitySpectrum st = stability_spectrum(s, pt.k, g, gamma);
      out.row(pt.k, to_string(s.family), s.z, st.max_im, st.stable, s.branch, s.mu.real(),
              s.mu.imag());
      for (const Complex& w : st.omegas)
        om.row(pt.k, to_string(s.family), s.branch, s.z, w.real(), w.imag());
    }
  r.files = {out.path().string(), om.path().string()};
}

inline void semiclassics(const ExperimentConfig& cfg, const std::filesystem::path& dir,
                         RunResult& r) {
  const Params p{cfg};
  const double F = p.num("F"), gamma = nonneg(p.num("gamma"), "gamma");
  const std::string b = p.str("band");
  if (b != "plus" && b != "minus") throw ParameterError("band must be plus or minus");
  PhaseSpaceState s = packet_state(p.num("q0"), p.num("p0"), p.num("sigma"),
                                   b == "plus" ? Band::plus : Band::minus);
  if (!(p.num("sigma") > 0.0)) throw ParameterError("sigma must be positive");
  if (!p.str("sigma_qq").empty()) s.s_qq = p.num("sigma_qq");
  if (!p.str("sigma_qp").empty()) s.s_qp = p.num("sigma_qp");
  if (!p.str("sigma_pp").empty()) s.s_pp = p.num("sigma_pp");
  const auto traj = evolve_semiclassical(s, F, gamma, p.time("t_final", F), p.time("dt_out", F));
  CsvWriter out(dir / "semiclassics.csv", cfg, {"t", "q", "p", "Sigma_qq", "Sigma_qp", "Sigma_pp"});
  for (const auto& x : traj) out.row(x.time, x.q, x.p, x.s_qq, x.s_qp, x.s_pp);
  r.files = {out.path().string()};
}

inline void lz(const ExperimentConfig& cfg, const std::filesystem::path& dir, RunResult& r) {
  const Params p{cfg};
  const auto Fs = config::to_doubles("F", p.str("F"));
  const auto gs = config::to_doubles("gamma", p.str("gamma"));
  const double sigma = p.num("sigma");
  const bool measure = config::to_bool("measure", p.str("measure"));
  CsvWriter out(dir / "lz.csv", cfg, {"gamma", "F", "P_formula", "P_measured"});
  for (double F : Fs)
    for (double g : gs) {
      const double P = landau_zener_probability(F, nonneg(g, "gamma"));
      double m = std::nan("");
      if (measure) {
        const int L = p.str("L") == "auto" ? static_cast<int>(std::ceil(4.0 / F)) + 25 : p.integer("L");
        m = measure_band_transfer(LatticeSpec::uniform(L, F, g), {0.0, 0.0, sigma});
      }
      out.row(g, F, P, m);
    }
  r.files = {out.path().string()};
}

inline void manybody(const ExperimentConfig& cfg, const std::filesystem::path& dir, RunResult& r) {
  const Params p{cfg};
  const int N = p.integer("N");
  const LatticeSpec spec = LatticeSpec::uniform(p.integer("L"), nonneg(p.num("F"), "F"),
                                                p.num("gamma"), p.num("U"));
  const FockBasis basis(spec.sites(), N);
  const WaveFunction orb = parse_initial_state(spec, p.str("init"));
  const BECState bec = make_bec_state(basis, orb.amplitudes, N);
  const double t1 = p.time("t_final", spec.tilt()), dt = p.time("dt_out", spec.tilt());
  const std::string engine = p.str("engine");
  if (engine != "auto" && engine != "direct" && engine != "sector")
    throw ParameterError("engine must be auto, direct or sector");
  const LindbladTrace tr =
      engine == "direct"
          ? evolve_lindblad(spec, basis, bec.vector * bec.vector.adjoint(), t1, dt, N, ode_options(p))
          : evolve_lindblad_pure_sector(spec, basis, bec.vector, t1, dt, N, ode_options(p));
  CsvWriter dens(dir / "density.csv", cfg, {"t", "j", "n_j", "renorm"});
  CsvWriter num(dir / "number.csv", cfg, {"t", "N_total"});
  const int L = spec.half_width();
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    for (int j = -L; j <= L; ++j)
      dens.row(tr.times[i], j, tr.site_density(row, j + L), tr.renormalised_density(row, j + L));
    num.row(tr.times[i], tr.total_number[i]);
  }
  nlohmann::ordered_json body;
  double drift = 0.0, min_eig = 0.0;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    drift = std::max(drift, std::abs(tr.trace[i] - tr.trace.front()));
    min_eig = std::min(min_eig, tr.min_eigenvalue[i]);
  }
  body["engine"] = engine == "direct" ? "direct" : "sector";
  body["basis_dim"] = basis.dim();
  body["max_trace_drift"] = drift;
  body["min_eigenvalue"] = min_eig;
  body["positivity_violation"] = tr.positivity_violation;
  body["boundary_spill"] = tr.boundary_spill;
  write_json(dir / "manybody.json", cfg, body);
  r.files = {dens.path().string(), num.path().string(), (dir / "manybody.json").string()};
}

}  // namespace commands

inline std::string error_record(const std::string& kind, int code, const std::string& message,
                                const std::string& file = "") {
  nlohmann::ordered_json j;
  j["status"] = "error";
  j["kind"] = kind;
  j["exit_code"] = code;
  j["message"] = message;
  if (!file.empty()) j["file"] = file;
  return j.dump();
}

/// Validates, runs and writes outputs; never throws.
inline RunResult run(const ExperimentConfig& in) {
  RunResult r;
  try {
    const ExperimentConfig cfg = resolve(in);
    const std::filesystem::path dir = cfg.params.at("out_dir");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "'", dir.string());
    const std::string& c = cfg.command;
    if (c == "spectrum") commands::spectrum(cfg, dir, r);
    else if (c == "evolve") commands::evolve(cfg, dir, r);
    else if (c == "bands") commands::bands(cfg, dir, r);
    else if (c == "nlbands") commands::nlbands(cfg, dir, r);
    else if (c == "bdg") commands::bdg(cfg, dir, r);
    else if (c == "semiclassics") commands::semiclassics(cfg, dir, r);
    else if (c == "lz") commands::lz(cfg, dir, r);
    else if (c == "manybody") commands::manybody(cfg, dir, r);
  } catch (const UnknownCommand& e) {
    r = {unknown_subcommand, {}, error_record("unknown_subcommand", unknown_subcommand, e.what())};
  } catch (const ParameterError& e) {
    r = {invalid_parameter, {}, error_record("invalid_parameter", invalid_parameter, e.what())};
  } catch (const IoError& e) {
    r = {io_error, {}, error_record("io_error", io_error, e.what(), e.path())};
  } catch (const Error& e) {
    r = {module_error, {}, error_record("module_error", module_error, e.what())};
  } catch (const std::exception& e) {
    r = {module_error, {}, error_record("module_error", module_error, e.what())};
  }
  return r;
}

/// Loads a config file and runs it.
inline RunResult run_file(const std::string& path) {
  try {
    return run(config::load(path));
  } catch (const IoError& e) {
    return {io_error, {}, error_record("io_error", io_error, e.what(), e.path())};
  } catch (const ParameterError& e) {
    return {invalid_parameter, {}, error_record("invalid_parameter", invalid_parameter, e.what(), path)};
  }
}

// ---------------------------------------------------------------------------
// figure manifest

struct ManifestPanel {
  std::string id;
  std::vector<std::string> args;  // subcommand followed by flags
};

struct ManifestFigure {
  std::string id;
  std::string description;
  std::vector<ManifestPanel> panels;
};

inline std::string flag(const std::string& key) {
  std::string f = "--" + key;
  for (auto& c : f)
    if (c == '_') c = '-';
  return f;
}

inline std::vector<ManifestFigure> figure_manifest(const std::string& seed = "7") {
  auto P = [](std::string id, std::vector<std::string> a) {
    a.push_back("--out-dir");
    a.push_back(id);
    return ManifestPanel{std::move(id), std::move(a)};
  };
  const std::string gauss = "gaussian:0,0," + sqrt20;
  std::vector<ManifestFigure> m;
  m.push_back({"fig1", "converged spectrum vs gamma",
               {P("fig1-top", {"spectrum", "--F", "0.3", "--gamma-sweep", "0:1:0.01"}),
                P("fig1-bottom", {"spectrum", "--F", "1", "--gamma-sweep", "0:1:0.01"})}});
  m.push_back({"fig2", "site-0 breathing and frequency doubling",
               {P("fig2-top-left", {"evolve", "--mode", "sp", "--L", "40", "--init", "delta:0", "--F", "0.3",
                                    "--gamma", "0", "--t-final", "6T"}),
                P("fig2-top-middle", {"evolve", "--mode", "sp", "--L", "40", "--init", "delta:0", "--F",
                                      "0.3", "--gamma", "0.2", "--t-final", "6T"}),
                P("fig2-bottom-left", {"evolve", "--mode", "sp", "--L", "40", "--init", "delta:0", "--F",
                                       "1", "--gamma", "0", "--t-final", "3T"}),
                P("fig2-bottom-middle", {"evolve", "--mode", "sp", "--L", "40", "--init", "delta:0",
                                         "--F", "1", "--gamma", "0.4", "--t-final", "3T"})}});
  m.push_back({"fig3", "linear dispersion", {P("fig3", {"bands", "--gamma", "0.05", "--nk", "801"})}});
  m.push_back({"fig4", "Gaussian beam Bloch oscillation",
               {P("fig4-left", {"evolve", "--mode", "sp", "--L", "60", "--F", "0.2", "--gamma", "0.05",
                                "--init", gauss, "--t-final", "2T"}),
                P("fig4-middle", {"evolve", "--mode", "sp", "--L", "60", "--F", "0.2", "--gamma-random",
                                  "0.025,0.125", "--seed", seed, "--init", gauss, "--t-final", "2T"})}});
  m.push_back({"fig5", "nonlinear Bloch bands",
               {P("fig5-g0", {"nlbands", "--g", "0", "--gamma", "0.1", "--nk", "801"}),
                P("fig5-g2", {"nlbands", "--g", "2", "--gamma", "0.1", "--nk", "801"}),
                P("fig5-g7", {"nlbands", "--g", "7", "--gamma", "0.1", "--nk", "801"})}});
  m.push_back({"fig6", "BdG eigenvalues at fixed k",
               {P("fig6-g2", {"bdg", "--g", "2", "--gamma", "0.1", "--k-values", "0,-1.2566370614359172"}),
                P("fig6-g7", {"bdg", "--g", "7", "--gamma", "0.1", "--k-values", "0,-1.2566370614359172"})}});
  m.push_back({"fig7", "stability maps",
               {P("fig7-g2", {"bdg", "--g", "2", "--gamma", "0.1", "--nk", "801"}),
                P("fig7-g7", {"bdg", "--g", "7", "--gamma", "0.1", "--nk", "801"})}});
  std::vector<ManifestPanel> f8, f9;
  for (const char* g : {"2", "7"})
    for (const char* band : {"lower", "upper"})
      f8.push_back(P(std::string("fig8-g") + g + "-" + band,
                     {"evolve", "--mode", "mf", "--L", "60", "--F", "0.2", "--gamma", "0.1", "--g", g,
                      "--init", std::string("nlbloch:") + band + ",0,0," + sqrt20, "--t-final", "2T"}));
  for (const char* U : {"1", "7"})
    for (const char* band : {"lower", "upper"})
      f9.push_back(P(std::string("fig9-U") + U + "-" + band,
                     {"manybody", "--N", "2", "--L", "20", "--U", U, "--F", "0.2", "--gamma", "0.1",
                      "--init", std::string("nlbloch:") + band + ",0,0," + sqrt20, "--t-final", "1.5T"}));
  m.push_back({"fig8", "mean-field beam dynamics", f8});
  m.push_back({"fig9", "two-particle beam dynamics", f9});
  return m;
}

/// Turns "--flag value" pairs of a manifest panel into a config.
inline ExperimentConfig config_from_args(const std::vector<std::string>& args) {
  if (args.empty()) throw ParameterError("empty invocation");
  ExperimentConfig cfg;
  cfg.command = args[0];
  for (std::size_t i = 1; i < args.size(); i += 2) {
    if (args[i].rfind("--", 0) != 0 || i + 1 >= args.size())
      throw ParameterError("malformed flag list near '" + args[i] + "'");
    std::string key = args[i].substr(2);
    for (auto& c : key)
      if (c == '-') c = '_';
    cfg.params[key] = args[i + 1];
  }
  return cfg;
}

inline std::string shell_quote(const std::string& s) {
  if (s.find_first_of(" \t'\"|;&") == std::string::npos) return s;
  return "'" + s + "'";
}

inline std::string manifest_text(const std::vector<ManifestFigure>& m,
                                 const std::string& program = "lossychain") {
  std::ostringstream os;
  for (const auto& f : m) {
    os << f.id << "  # " << f.description << '\n';
    for (const auto& p : f.panels) {
      os << "  " << p.id << ": " << program;
      for (const auto& a : p.args) os << ' ' << shell_quote(a);
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace lossychain::app

#endif  // LOSSYCHAIN_APP_HPP
