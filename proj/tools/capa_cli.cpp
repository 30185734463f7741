// capa: channel statistics of a linear continuous-aperture array under
// isotropic scattering. Emits machine-readable CSV/JSON; every output
// carries a run manifest so results can be reproduced byte for byte.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "capa/capacity.hpp"
#include "capa/gaindist.hpp"
#include "capa/montecarlo.hpp"
#include "capa/spectrum.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNonConvergence = 3;
constexpr int kExitIo = 4;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

std::string iso8601_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::string artifact_version = CAPA_VERSION_STRING;
  std::string timestamp = iso8601_now();

  json to_json(bool with_timestamp = true) const {
    json j;
    j["command"] = command;
    j["parameters"] = parameters;
    j["artifact_version"] = artifact_version;
    if (with_timestamp) j["timestamp"] = timestamp;
    return j;
  }
};

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const RunManifest& manifest)
      : out_(path) {
    if (!out_) throw std::ios_base::failure("cannot open " + path);
    // Timestamp goes on its own comment line so that payloads of identical
    // runs stay byte-identical after dropping it.
    out_ << "# manifest = " << manifest.to_json(false).dump() << "\n";
    out_ << "# timestamp = " << manifest.timestamp << "\n";
  }
  void comment(const std::string& key, const std::string& value) {
    out_ << "# " << key << " = " << value << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ",";
      out_ << cells[i];
    }
    out_ << "\n";
  }
  void close(const std::string& path) {
    out_.flush();
    if (!out_) throw std::ios_base::failure("write failed: " + path);
    out_.close();
  }

 private:
  std::ofstream out_;
};

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot open " + path);
  out << j.dump(2) << "\n";
  if (!out) throw std::ios_base::failure("write failed: " + path);
}

struct CommonOpts {
  double L = 10.0;
  double fc = 2.4e9;
  double noise = 5.6e-3;
  std::uint64_t seed = 42;
  std::int64_t samples = 100000;
  int order = 0;  // 0: max(64, 4 DOF)
  std::string out;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_out = true) {
  cmd->add_option("--L", o.L, "Aperture length in wavelengths")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--fc", o.fc, "Carrier frequency in Hz")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--noise", o.noise, "Noise power in V^2/m")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--samples", o.samples, "Monte Carlo sample count")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--order", o.order, "Quadrature order (0 = auto)");
  auto* out = cmd->add_option("--out", o.out, "Output path");
  if (needs_out) out->required();
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
}

int effective_order(const capa::Aperture& ap, int requested) {
  return requested > 0 ? requested : capa::default_order(ap);
}

void fill_common_params(RunManifest& m, const CommonOpts& o) {
  m.parameters["L_wl"] = fmt(o.L);
  m.parameters["fc_hz"] = fmt(o.fc);
  m.parameters["noise_v2m"] = fmt(o.noise);
  m.parameters["seed"] = std::to_string(o.seed);
  m.parameters["samples"] = std::to_string(o.samples);
  m.parameters["order"] = std::to_string(o.order);
  m.parameters["format"] = o.format;
}

// ---- eigs ---------------------------------------------------------------

int cmd_eigs(const CommonOpts& o) {
  const capa::Aperture ap(o.L, o.fc);
  const int order = effective_order(ap, o.order);
  const auto d = capa::eigendecompose(ap, order, false);

  RunManifest m;
  m.command = "eigs";
  fill_common_params(m, o);
  m.parameters["effective_order"] = std::to_string(order);

  if (o.format == "json") {
    json j;
    j["manifest"] = m.to_json();
    j["dof"] = d.dof;
    json rows = json::array();
    for (std::size_t l = 0; l < d.eps.size(); ++l)
      rows.push_back({{"index", l + 1},
                      {"epsilon", d.eps[l]},
                      {"sigma", d.sigma[l]}});
    j["eigenvalues"] = rows;
    write_json_file(o.out, j);
    return kExitOk;
  }

  CsvWriter csv(o.out, m);
  csv.comment("dof", fmt(d.dof));
  for (double eps : {0.1, 0.25, 0.5, 0.9})
    csv.comment("landau_count_eps_" + fmt(eps),
                fmt(capa::landau_count(eps, d.dof)));
  csv.row({"index", "epsilon", "sigma"});
  for (std::size_t l = 0; l < d.eps.size(); ++l)
    csv.row({std::to_string(l + 1), fmt(d.eps[l]), fmt(d.sigma[l])});
  csv.close(o.out);
  return kExitOk;
}

// ---- pdf ----------------------------------------------------------------

struct PdfOpts {
  CommonOpts common;
  double grid_min = 0.0;
  double grid_max = -1.0;  // <0: mean + 8 sqrt(var)
  int grid_points = 512;
  bool with_mc = false;
  double tol = 1e-10;
};

int cmd_pdf(const PdfOpts& o) {
  const capa::Aperture ap(o.common.L, o.common.fc);
  const int order = effective_order(ap, o.common.order);
  const auto decomp = capa::eigendecompose(ap, order, false);
  const auto spec = capa::make_gain_spectrum(decomp);
  const auto psi = capa::make_psi_series(spec, o.tol);
  if (!psi.converged) {
    std::cerr << "pdf: psi series did not converge within the cap\n";
    return kExitNonConvergence;
  }

  const auto mom = capa::moments(spec);
  const double hi =
      o.grid_max > 0.0 ? o.grid_max : mom.mean + 8.0 * std::sqrt(mom.variance);

  std::vector<double> ecdf;
  if (o.with_mc) {
    capa::SimulationConfig cfg;
    cfg.seed = o.common.seed;
    cfg.n_samples = o.common.samples;
    capa::SpectralFieldSimulator sim(ap, cfg);
    auto batch = sim.batch(o.common.samples);
    std::sort(batch.gains.begin(), batch.gains.end());
    ecdf = std::move(batch.gains);
  }

  RunManifest m;
  m.command = "pdf";
  fill_common_params(m, o.common);
  m.parameters["grid_min"] = fmt(o.grid_min);
  m.parameters["grid_max"] = fmt(hi);
  m.parameters["grid_points"] = std::to_string(o.grid_points);
  m.parameters["mc"] = o.with_mc ? "true" : "false";
  m.parameters["psi_tol"] = fmt(o.tol);

  CsvWriter csv(o.common.out, m);
  csv.comment("dof", fmt(decomp.dof));
  csv.comment("spectrum_terms", std::to_string(spec.size()));
  csv.comment("psi_terms", std::to_string(psi.q_max + 1));
  csv.comment("gain_mean", fmt(mom.mean));
  csv.comment("gain_variance", fmt(mom.variance));

  std::vector<std::string> header = {"x", "pdf", "cdf"};
  if (o.with_mc) header.push_back("ecdf");
  csv.row(header);
  for (int i = 0; i < o.grid_points; ++i) {
    const double x =
        o.grid_min + (hi - o.grid_min) * i / (o.grid_points - 1);
    std::vector<std::string> cells = {fmt(x), fmt(capa::pdf(spec, psi, x)),
                                      fmt(capa::cdf(spec, psi, x))};
    if (o.with_mc) {
      const auto it = std::upper_bound(ecdf.begin(), ecdf.end(), x);
      cells.push_back(
          fmt(static_cast<double>(it - ecdf.begin()) / ecdf.size()));
    }
    csv.row(cells);
  }
  csv.close(o.common.out);
  return kExitOk;
}

// ---- capacity -----------------------------------------------------------

struct CapacityOpts {
  CommonOpts common;
  std::vector<double> powers;
  std::string mode = "all";
  double tol = 1e-10;
};

int cmd_capacity(const CapacityOpts& o) {
  const capa::Aperture ap(o.common.L, o.common.fc);
  const int order = effective_order(ap, o.common.order);
  const auto decomp = capa::eigendecompose(ap, order, true);
  const auto spec = capa::make_gain_spectrum(decomp);
  const auto psi = capa::make_psi_series(spec, o.tol);
  if (!psi.converged) {
    std::cerr << "capacity: psi series did not converge within the cap\n";
    return kExitNonConvergence;
  }

  std::vector<double> powers = o.powers;
  if (powers.empty())
    powers = {1e-3, 3.16e-3, 1e-2, 3.16e-2, 1e-1, 3.16e-1, 1.0, 3.16, 10.0};
  for (double p : powers)
    if (!(p > 0.0)) {
      std::cerr << "capacity: powers must be positive\n";
      return kExitValidation;
    }

  const bool want_closed = o.mode == "all" || o.mode == "closed";
  const bool want_mc = o.mode == "all" || o.mode == "mc";
  const bool want_mimo = o.mode == "all" || o.mode == "mimo";
  const bool want_asym = o.mode == "all" || o.mode == "asymptote";

  capa::SimulationConfig cfg;
  cfg.seed = o.common.seed;
  cfg.n_samples = o.common.samples;

  capa::SampleBatch mc_batch, mimo_batch;
  if (want_mc) {
    capa::SpectralFieldSimulator sim(ap, cfg);
    mc_batch = sim.batch(o.common.samples);
  }
  if (want_mimo) {
    capa::MimoBaselineSimulator mimo(ap, cfg);
    mimo_batch = mimo.batch(o.common.samples);
  }
  const auto asym = capa::high_snr_asymptote(spec, psi);

  RunManifest m;
  m.command = "capacity";
  fill_common_params(m, o.common);
  m.parameters["mode"] = o.mode;
  m.parameters["psi_tol"] = fmt(o.tol);
  {
    std::ostringstream ps;
    for (std::size_t i = 0; i < powers.size(); ++i)
      ps << (i ? ";" : "") << fmt(powers[i]);
    m.parameters["powers_w"] = ps.str();
  }

  CsvWriter csv(o.common.out, m);
  csv.comment("dof", fmt(decomp.dof));
  csv.comment("high_snr_slope", fmt(asym.slope));
  csv.comment("high_snr_offset_3db", fmt(asym.offset_3db));
  csv.row({"P", "gamma_bar", "capacity_closed_form", "capacity_mc",
           "capacity_mc_stderr", "capacity_mimo", "capacity_asymptote",
           "status"});

  for (double p : powers) {
    const auto snr = capa::SnrConfig::from_power(p, o.common.noise);
    std::string closed, mc, mc_se, mimo, asymp, status = "ok";
    if (want_closed) {
      try {
        closed = fmt(capa::avg_capacity(spec, psi, snr).ergodic_bits);
      } catch (const capa::RegimeError&) {
        closed = fmt(capa::capacity_quadrature_oracle(spec, psi, snr));
        status = "oracle_fallback";
      }
    }
    if (want_mc) {
      const auto r = capa::ergodic_capacity_mc(mc_batch, snr);
      mc = fmt(r.mean_bits);
      mc_se = fmt(r.stderr_bits);
    }
    if (want_mimo)
      mimo = fmt(capa::ergodic_capacity_mc(mimo_batch, snr).mean_bits);
    if (want_asym)
      asymp = fmt(std::log2(snr.gamma_bar) - asym.offset_3db);
    csv.row({fmt(p), fmt(snr.gamma_bar), closed, mc, mc_se, mimo, asymp,
             status});
  }
  csv.close(o.common.out);
  return kExitOk;
}

// ---- compare ------------------------------------------------------------

int cmd_compare(const CapacityOpts& o) {
  const capa::Aperture ap(o.common.L, o.common.fc);

  std::vector<double> powers = o.powers;
  if (powers.empty()) powers = {1e-3, 1e-2, 1e-1, 1.0, 10.0};

  capa::SimulationConfig cfg;
  cfg.seed = o.common.seed;
  cfg.n_samples = o.common.samples;
  capa::SpectralFieldSimulator sim(ap, cfg);
  capa::MimoBaselineSimulator mimo(ap, cfg);
  const auto capa_batch = sim.batch(o.common.samples);
  const auto mimo_batch = mimo.batch(o.common.samples);

  RunManifest m;
  m.command = "compare";
  fill_common_params(m, o.common);

  json rows = json::array();
  for (double p : powers) {
    if (!(p > 0.0)) {
      std::cerr << "compare: powers must be positive\n";
      return kExitValidation;
    }
    const auto snr = capa::SnrConfig::from_power(p, o.common.noise);
    const auto c = capa::ergodic_capacity_mc(capa_batch, snr);
    const auto d = capa::ergodic_capacity_mc(mimo_batch, snr);
    const double gap = c.mean_bits - d.mean_bits;
    rows.push_back({{"power_w", p},
                    {"gamma_bar", snr.gamma_bar},
                    {"capa_bits", c.mean_bits},
                    {"capa_stderr", c.stderr_bits},
                    {"mimo_bits", d.mean_bits},
                    {"mimo_stderr", d.stderr_bits},
                    {"gap_bits", gap},
                    {"gap_positive", gap > 0.0}});
  }

  json j;
  j["manifest"] = m.to_json();
  j["mimo_elements"] = mimo.n_elements();
  j["mimo_element_length_wl"] = capa::MimoBaselineSimulator::element_length_wl();
  j["rows"] = rows;
  write_json_file(o.common.out, j);
  return kExitOk;
}

// ---- simulate -----------------------------------------------------------

struct SimulateOpts {
  CommonOpts common;
  std::string method = "spectral";
  int kappa_bins = 0;
  int z_points = 0;
};

int cmd_simulate(const SimulateOpts& o) {
  const capa::Aperture ap(o.common.L, o.common.fc);
  capa::SimulationConfig cfg;
  cfg.seed = o.common.seed;
  cfg.n_samples = o.common.samples;
  cfg.kappa_bins = o.kappa_bins;
  cfg.z_points = o.z_points;

  capa::SampleBatch batch;
  if (o.method == "spectral") {
    batch = capa::SpectralFieldSimulator(ap, cfg).batch(o.common.samples);
  } else if (o.method == "kl") {
    const auto decomp =
        capa::eigendecompose(ap, effective_order(ap, o.common.order), true);
    batch = capa::KlFieldSimulator(decomp, cfg).batch(o.common.samples);
  } else {
    batch = capa::MimoBaselineSimulator(ap, cfg).batch(o.common.samples);
  }

  double mean = 0.0, m2 = 0.0;
  for (double g : batch.gains) mean += g;
  mean /= batch.gains.size();
  for (double g : batch.gains) m2 += (g - mean) * (g - mean);
  m2 /= std::max<std::size_t>(1, batch.gains.size() - 1);

  RunManifest m;
  m.command = "simulate";
  fill_common_params(m, o.common);
  m.parameters["method"] = o.method;
  m.parameters["kappa_bins"] = std::to_string(batch.config.kappa_bins);
  m.parameters["z_points"] = std::to_string(batch.config.z_points);

  CsvWriter csv(o.common.out, m);
  csv.comment("gain_mean", fmt(mean));
  csv.comment("gain_variance", fmt(m2));
  if (batch.config.resolution_warning)
    csv.comment("warning", "grid resolution below recommended minimum");
  csv.row({"sample", "gain"});
  for (std::size_t i = 0; i < batch.gains.size(); ++i)
    csv.row({std::to_string(i), fmt(batch.gains[i])});
  csv.close(o.common.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Channel statistics of a linear continuous-aperture array"};
  app.require_subcommand(1);

  CommonOpts eigs_opts;
  auto* eigs = app.add_subcommand("eigs", "Kernel eigenvalue spectrum");
  add_common(eigs, eigs_opts);

  PdfOpts pdf_opts;
  auto* pdf = app.add_subcommand("pdf", "Gain distribution (PDF/CDF)");
  add_common(pdf, pdf_opts.common);
  pdf->add_option("--grid-min", pdf_opts.grid_min, "Grid lower end");
  pdf->add_option("--grid-max", pdf_opts.grid_max,
                  "Grid upper end (default mean + 8 sd)");
  pdf->add_option("--grid-points", pdf_opts.grid_points, "Grid size")
      ->check(CLI::Range(2, 1000000));
  pdf->add_flag("--mc", pdf_opts.with_mc, "Append Monte Carlo ECDF column");
  pdf->add_option("--tol", pdf_opts.tol, "Series tail tolerance")
      ->check(CLI::PositiveNumber);

  CapacityOpts cap_opts;
  auto* cap = app.add_subcommand("capacity", "Ergodic capacity sweep");
  add_common(cap, cap_opts.common);
  cap->add_option("--powers", cap_opts.powers, "Transmit powers in W");
  cap->add_option("--mode", cap_opts.mode, "Columns to populate")
      ->check(CLI::IsMember({"all", "closed", "mc", "mimo", "asymptote"}));
  cap->add_option("--tol", cap_opts.tol, "Series tail tolerance")
      ->check(CLI::PositiveNumber);

  CapacityOpts cmp_opts;
  auto* cmp = app.add_subcommand("compare", "CAPA vs discrete MIMO baseline");
  add_common(cmp, cmp_opts.common);
  cmp->add_option("--powers", cmp_opts.powers, "Transmit powers in W");

  SimulateOpts sim_opts;
  auto* sim = app.add_subcommand("simulate", "Raw gain draws");
  add_common(sim, sim_opts.common);
  sim->add_option("--method", sim_opts.method, "Field construction")
      ->check(CLI::IsMember({"spectral", "kl", "mimo"}));
  sim->add_option("--kappa-bins", sim_opts.kappa_bins, "Wavenumber bins");
  sim->add_option("--z-points", sim_opts.z_points, "Aperture grid points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (eigs->parsed()) return cmd_eigs(eigs_opts);
    if (pdf->parsed()) return cmd_pdf(pdf_opts);
    if (cap->parsed()) return cmd_capacity(cap_opts);
    if (cmp->parsed()) return cmd_compare(cmp_opts);
    if (sim->parsed()) return cmd_simulate(sim_opts);
  } catch (const std::ios_base::failure& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const capa::RegimeError& e) {
    std::cerr << "numerical regime error: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::runtime_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNonConvergence;
  }
  return kExitValidation;
}
