// Acceptance suite: one line of output per criterion, [PASS] or [FAIL],
// nonzero exit if any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "capa/capacity.hpp"
#include "capa/gaindist.hpp"
#include "capa/montecarlo.hpp"
#include "capa/spectrum.hpp"

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int idx, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", idx, name,
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---- 1: eigenvalue step behavior ---------------------------------------

void criterion_1() {
  const auto t0 = Clock::now();
  const auto d = capa::eigendecompose(capa::Aperture(10.0), 128, false);
  const double elapsed = seconds_since(t0);
  int above = 0;
  for (double e : d.eps)
    if (e > 0.25) ++above;
  const bool ok = d.eps[9] > 0.99 && d.eps[39] < 1e-3 && above >= 18 &&
                  above <= 22 && elapsed < 1.0;
  report(1, "eigenvalue step behavior at L=10",
         ok,
         "eps10=" + num(d.eps[9]) + " eps40=" + num(d.eps[39]) +
             " count>0.25=" + std::to_string(above) + " time=" +
             num(elapsed) + "s");
}

// ---- 2: trace identity --------------------------------------------------

void criterion_2() {
  bool ok = true;
  double worst = 0.0;
  for (double L : {0.5, 2.5, 10.0, 40.0}) {
    const capa::Aperture ap(L);
    const auto d = capa::eigendecompose(ap, capa::default_order(ap), false);
    double sum = 0.0;
    for (double e : d.eps) sum += e;
    const double rel = std::abs(sum - 2.0 * L) / (2.0 * L);
    worst = std::max(worst, rel);
    ok = ok && rel <= 1e-10;
  }
  report(2, "trace identity sum(eps) = 2L", ok, "worst rel err " + num(worst));
}

// ---- 3: Landau-count consistency ---------------------------------------

void criterion_3() {
  bool ok = true;
  double worst = 0.0;
  for (double L : {10.0, 20.0, 40.0}) {
    const capa::Aperture ap(L);
    const auto d = capa::eigendecompose(ap, capa::default_order(ap), false);
    const double bound = 2.0 + std::log(capa::dof(ap));
    for (double eps : {0.1, 0.25, 0.5, 0.9}) {
      int count = 0;
      for (double e : d.eps)
        if (e > eps) ++count;
      const double gap =
          std::abs(count - capa::landau_count(eps, capa::dof(ap)));
      worst = std::max(worst, gap / bound);
      ok = ok && gap <= bound;
    }
  }
  report(3, "Landau count tracks the computed spectrum", ok,
         "worst gap/bound " + num(worst));
}

// ---- 4: series correctness ----------------------------------------------

void criterion_4() {
  const auto spec = capa::gain_spectrum_from_sigmas({2.0, 1.0});
  const auto psi = capa::make_psi_series(spec, 1e-13, 200000);
  double worst = 0.0;
  for (double x = 0.0; x <= 20.0; x += 0.125) {
    const double pdf_exact = std::exp(-x / 2.0) - std::exp(-x);
    const double cdf_exact = 1.0 + std::exp(-x) - 2.0 * std::exp(-x / 2.0);
    worst = std::max(worst, std::abs(capa::pdf(spec, psi, x) - pdf_exact));
    worst = std::max(worst, std::abs(capa::cdf(spec, psi, x) - cdf_exact));
  }
  bool ok = psi.converged && worst < 1e-9;

  const auto eq = capa::gain_spectrum_from_sigmas({0.4, 0.4, 0.4, 0.4});
  const auto eq_psi = capa::make_psi_series(eq, 1e-13);
  ok = ok && eq_psi.q_max == 0;
  double gamma_worst = 0.0;
  for (double x : {0.2, 1.0, 3.0}) {
    const double expect =
        x * x * x * std::exp(-x / 0.4) / (std::pow(0.4, 4) * 6.0);
    gamma_worst =
        std::max(gamma_worst, std::abs(capa::pdf(eq, eq_psi, x) - expect));
  }
  ok = ok && gamma_worst < 1e-12;
  report(4, "series matches hypoexponential and gamma closed forms", ok,
         "hypoexp err " + num(worst) + ", gamma err " + num(gamma_worst));
}

// ---- 5: end-to-end distribution match -----------------------------------

void criterion_5() {
  const capa::Aperture ap(10.0);
  const auto d = capa::eigendecompose(ap, 128, false);
  const auto spec = capa::make_gain_spectrum(d);
  const auto psi = capa::make_psi_series(spec, 1e-10);

  const std::int64_t n = 1000000;
  const auto t0 = Clock::now();
  capa::SimulationConfig cfg;
  cfg.seed = 20240817;
  cfg.n_samples = n;
  const capa::SpectralFieldSimulator sim(ap, capa::resolve_config(ap, cfg));
  auto gains = sim.batch(n, 1).gains;  // single worker, per the time budget
  std::sort(gains.begin(), gains.end());
  const double elapsed = seconds_since(t0);

  double ks = 0.0;
  for (std::int64_t i = 0; i < n; i += 23) {
    const double f = capa::cdf(spec, psi, gains[i]);
    ks = std::max(ks, std::abs(f - static_cast<double>(i) / n));
    ks = std::max(ks, std::abs(f - static_cast<double>(i + 1) / n));
  }
  const bool ok = ks < 0.01 && elapsed < 120.0;
  report(5, "closed-form CDF vs 1e6 spectral draws, sup-distance < 0.01", ok,
         "KS=" + num(ks) + " time=" + num(elapsed) + "s");
}

// ---- 6: capacity triple agreement ---------------------------------------

void criterion_6() {
  bool ok = true;
  double worst_oracle = 0.0, worst_mc = 0.0;
  for (double L : {2.5, 10.0}) {
    const capa::Aperture ap(L);
    const auto d = capa::eigendecompose(ap, capa::default_order(ap), false);
    const auto spec = capa::make_gain_spectrum(d);
    const auto psi = capa::make_psi_series(spec, 1e-12);
    const auto batch = capa::spectrum_batch(spec, 99, 100000);
    for (double g : {1.0, 10.0, 100.0, 1000.0}) {
      const auto snr = capa::SnrConfig::from_gamma(g);
      const double closed = capa::avg_capacity(spec, psi, snr).ergodic_bits;
      const double oracle = capa::capacity_quadrature_oracle(spec, psi, snr);
      const auto mc = capa::ergodic_capacity_mc(batch, snr);
      worst_oracle = std::max(worst_oracle, std::abs(closed - oracle));
      worst_mc = std::max(worst_mc,
                          std::abs(closed - mc.mean_bits) / mc.stderr_bits);
      ok = ok && std::abs(closed - oracle) < 1e-5 &&
           std::abs(closed - mc.mean_bits) < 3.0 * mc.stderr_bits;
    }
  }
  report(6, "capacity closed form vs quadrature and Monte Carlo", ok,
         "worst |closed-oracle| " + num(worst_oracle) + " bits, worst " +
             num(worst_mc) + " se");
}

// ---- 7: high-SNR asymptote ----------------------------------------------

void criterion_7() {
  const capa::Aperture ap(10.0);
  const auto d = capa::eigendecompose(ap, capa::default_order(ap), false);
  const auto spec = capa::make_gain_spectrum(d);
  const auto psi = capa::make_psi_series(spec, 1e-12);
  const auto asym = capa::high_snr_asymptote(spec, psi);
  const double g = 1e6;
  const double exact =
      capa::avg_capacity(spec, psi, capa::SnrConfig::from_gamma(g))
          .ergodic_bits;
  const double gap = std::abs(exact - (std::log2(g) - asym.offset_3db));

  const auto one = capa::gain_spectrum_from_sigmas({1.0});
  const auto one_psi = capa::make_psi_series(one);
  const double one_off = capa::high_snr_asymptote(one, one_psi).offset_3db;
  const double euler_gamma = 0.57721566490153286060651209008240;
  const double sanity = std::abs(one_off - euler_gamma / std::log(2.0));

  const bool ok = asym.slope == 1.0 && gap < 0.05 && sanity < 1e-9;
  report(7, "high-SNR slope 1 and offset", ok,
         "gap at 1e6 = " + num(gap) + " bits, unit-sigma offset err " +
             num(sanity));
}

// ---- 8 & 9: CLI-level checks --------------------------------------------

int run_cli(const std::string& args, const std::string& env) {
  const std::string cmd =
      (env.empty() ? "" : env + " ") + std::string(CAPA_CLI_PATH) + " " + args;
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string strip_timestamp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# timestamp = ", 0) == 0) continue;
    if (line.find("\"timestamp\"") != std::string::npos) continue;
    out << line << "\n";
  }
  return out.str();
}

void criterion_8() {
  const auto out = fs::temp_directory_path() / "capa_acceptance_compare.json";
  if (run_cli("compare --L 10 --samples 100000 --seed 31 --out " +
                  out.string(),
              "") != 0) {
    report(8, "compare: aperture beats the half-wavelength array", false,
           "CLI run failed");
    return;
  }
  // Re-derive the per-power margin from the library on the same draws.
  const capa::Aperture ap(10.0);
  capa::SimulationConfig cfg;
  cfg.seed = 31;
  cfg.n_samples = 100000;
  const auto rc = capa::resolve_config(ap, cfg);
  const auto capa_batch =
      capa::SpectralFieldSimulator(ap, rc).batch(cfg.n_samples);
  const auto mimo_batch =
      capa::MimoBaselineSimulator(ap, rc).batch(cfg.n_samples);
  bool ok = true;
  double worst = 1e300;
  for (double p : {1e-3, 1e-2, 1e-1, 1.0, 10.0}) {
    const auto snr = capa::SnrConfig::from_power(p, 5.6e-3);
    const auto a = capa::ergodic_capacity_mc(capa_batch, snr);
    const auto b = capa::ergodic_capacity_mc(mimo_batch, snr);
    const double gap = a.mean_bits - b.mean_bits;
    const double se =
        std::sqrt(a.stderr_bits * a.stderr_bits +
                  b.stderr_bits * b.stderr_bits);
    worst = std::min(worst, gap / se);
    ok = ok && gap > 0.0 && gap > 3.0 * se;
  }
  const std::string text = strip_timestamp(out);
  ok = ok && text.find("\"gap_positive\": false") == std::string::npos;
  report(8, "compare: aperture beats the half-wavelength array", ok,
         "min gap/combined-se " + num(worst));
}

void criterion_9() {
  const auto dir = fs::temp_directory_path();
  bool ok = true;
  std::string detail = "byte-identical under workers 1/2/8";
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"simulate --L 2.5 --samples 20000 --seed 5", "sim"},
      {"compare --L 2.5 --samples 20000 --seed 5", "cmp"},
  };
  for (const auto& [args, tag] : runs) {
    std::vector<std::string> outputs;
    for (int workers : {1, 2, 8}) {
      const auto out = dir / ("capa_acceptance_" + tag + "_w" +
                              std::to_string(workers) +
                              (tag == "cmp" ? ".json" : ".csv"));
      if (run_cli(args + " --out " + out.string(),
                  "CAPA_THREADS=" + std::to_string(workers)) != 0) {
        ok = false;
        detail = tag + " CLI run failed";
        break;
      }
      outputs.push_back(strip_timestamp(out));
    }
    for (std::size_t i = 1; i < outputs.size(); ++i)
      if (outputs[i] != outputs[0]) {
        ok = false;
        detail = tag + " output differs across worker counts";
      }
  }
  report(9, "reproducible output across worker counts", ok, detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (g_failures)
    std::printf("%d criterion(s) failed\n", g_failures);
  else
    std::printf("all criteria passed\n");
  return g_failures == 0 ? 0 : 1;
}
