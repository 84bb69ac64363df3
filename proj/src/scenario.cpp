#include "ionchaos/app/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ionchaos/classical.hpp"
#include "ionchaos/parallel.hpp"
#include "ionchaos/quantum.hpp"
#include "ionchaos/raman.hpp"
#include "ionchaos/scan.hpp"
#include "ionchaos/spectral.hpp"

namespace ionchaos::app {

namespace {

using Meta = std::vector<std::pair<std::string, std::string>>;
using csv::format_double;

struct JobOutput {
  std::vector<std::pair<std::string, std::string>> files;  // name, contents
  std::vector<std::string> failures;
};

std::string ext(const Scenario& s) { return s.format == OutputFormat::csv ? ".csv" : ".json"; }

Meta common_meta(const Scenario& s) {
  Meta m{{"tool", "ionchaos " + tool_version()}, {"scenario", s.name}, {"kind", to_string(s.kind)}};
  return m;
}

Meta model_meta(const Scenario& s, double epsilon) {
  Meta m = common_meta(s);
  const auto p = s.params(epsilon);
  m.insert(m.end(), {{"epsilon", format_double(p.epsilon())},
                     {"eta", format_double(p.eta())},
                     {"N", std::to_string(p.N())},
                     {"delta", format_double(p.delta())},
                     {"mu", format_double(p.mu())},
                     {"tau_end", format_double(s.tau_end)},
                     {"dtau", format_double(s.dtau)}});
  return m;
}

void add_spectrum_meta(Meta& m, const spectral::Spectrum& spec) {
  try {
    m.emplace_back("spectral_entropy", format_double(spectral::spectral_entropy(spec)));
    m.emplace_back("top5_power_fraction", format_double(spectral::dominant_bin_fraction(spec, 5)));
  } catch (const std::domain_error& e) {
    m.emplace_back("spectral_entropy", "nan");
    m.emplace_back("note", e.what());
  }
}

csv::Table spectrum_table(Meta meta, const spectral::Spectrum& spec, spectral::Window window) {
  meta.emplace_back("window", window == spectral::Window::hann ? "hann" : "rectangular");
  add_spectrum_meta(meta, spec);
  csv::Table t;
  t.metadata = std::move(meta);
  t.columns = {"nu", "power"};
  t.rows.reserve(spec.power.size());
  for (std::size_t k = 0; k < spec.power.size(); ++k) t.rows.push_back({spec.frequencies[k], spec.power[k]});
  return t;
}

// --- classical ------------------------------------------------------------

JobOutput classical_job(const Scenario& s, double eps) {
  JobOutput out;
  const auto p = s.params(eps);
  for (std::size_t ic = 0; ic < s.initial.size(); ++ic) {
    const auto& init = s.initial[ic];
    std::string stem = s.name + "_" + epsilon_tag(eps);
    if (s.initial.size() > 1) stem += "_ic" + std::to_string(ic);
    Meta meta = model_meta(s, eps);
    meta.emplace_back("xi0", format_double(init.xi));
    meta.emplace_back("v0", format_double(init.v));
    meta.emplace_back("rtol", format_double(s.tol.rtol));
    meta.emplace_back("atol", format_double(s.tol.atol));
    try {
      const auto traj = classical::integrate_cartesian(init, p, init.tau + s.tau_end, s.dtau, s.tol);
      if (s.kind == Kind::classical_trajectory) {
        csv::Table t;
        t.metadata = meta;
        t.metadata.emplace_back("integrator", traj.info.method);
        t.columns = {"tau", "xi", "v"};
        for (const auto& x : traj.samples) t.rows.push_back({x.tau, x.xi, x.v});
        out.files.emplace_back(stem + ext(s), render_table(t, s.format));
      } else {
        spectral::TimeSeries ts;
        ts.dtau = s.dtau;
        ts.label = "xi";
        for (const auto& x : traj.samples) ts.values.push_back(x.xi);
        meta.emplace_back("signal", "xi");
        const auto spec = spectral::power_spectrum(ts, s.window);
        out.files.emplace_back(stem + "_spectrum" + ext(s),
                               render_table(spectrum_table(meta, spec, s.window), s.format));
      }
    } catch (const std::exception& e) {
      out.failures.push_back(stem + ": " + e.what());
    }
  }
  return out;
}

JobOutput poincare_job(const Scenario& s, double eps) {
  JobOutput out;
  const auto p = s.params(eps);
  classical::PoincareOptions opts;
  opts.n_periods = s.poincare_periods;
  opts.phase = s.poincare_phase;
  opts.tol = s.tol;
  const auto results = classical::poincare_sections(s.initial, p, opts, 1);
  const std::string stem = s.name + "_" + epsilon_tag(eps);
  csv::Table t;
  t.metadata = model_meta(s, eps);
  t.metadata.emplace_back("periods", std::to_string(s.poincare_periods));
  t.metadata.emplace_back("phase", format_double(s.poincare_phase));
  t.metadata.emplace_back("drive_period", format_double(2.0 * std::numbers::pi / p.mu()));
  t.columns = {"ic", "k", "tau", "xi", "v"};
  for (std::size_t ic = 0; ic < results.size(); ++ic) {
    const auto& init = s.initial[ic];
    t.metadata.emplace_back("ic" + std::to_string(ic), format_double(init.xi) + " " + format_double(init.v));
    if (!results[ic].set) {
      t.metadata.emplace_back("ic" + std::to_string(ic) + "_error", results[ic].error);
      out.failures.push_back(stem + " ic" + std::to_string(ic) + ": " + results[ic].error);
      continue;
    }
    const auto& pts = results[ic].set->points;
    for (std::size_t k = 0; k < pts.size(); ++k)
      t.rows.push_back({double(ic), double(k + 1), pts[k].tau, pts[k].xi, pts[k].v});
  }
  out.files.emplace_back(stem + ext(s), render_table(t, s.format));
  return out;
}

// --- quantum --------------------------------------------------------------

JobOutput quantum_job(const Scenario& s, double eps) {
  JobOutput out;
  const auto p = s.params(eps);
  const std::string stem = s.name + "_" + epsilon_tag(eps);
  Meta meta = model_meta(s, eps);
  meta.emplace_back("initial_fock", std::to_string(s.fock));
  meta.emplace_back("nmax", std::to_string(s.nmax));
  meta.emplace_back("rtol", format_double(s.quantum.tol.rtol));
  meta.emplace_back("atol", format_double(s.quantum.tol.atol));
  meta.emplace_back("kernel", s.quantum.convention == quantum::KernelConvention::operator_definition
                                  ? "operator"
                                  : "printed");
  csv::Table t;
  spectral::TimeSeries ts;
  ts.dtau = s.dtau;
  ts.label = s.signal == Signal::p0 ? "p0" : "xi2";
  const bool spectrum = s.kind == Kind::quantum_spectrum;
  if (!spectrum) {
    for (int n = 0; n <= s.levels; ++n) t.columns.push_back("P_" + std::to_string(n));
    t.columns.insert(t.columns.begin(), "tau");
    t.columns.push_back("xi2");
    t.columns.push_back("h_lo");
  }
  try {
    const auto info = quantum::propagate(
        quantum::QuantumState::fock(s.fock, s.nmax, s.eta), p, s.tau_end, s.dtau,
        [&](const quantum::QuantumState& st) {
          if (spectrum) {
            ts.values.push_back(s.signal == Signal::p0 ? std::norm(st.amplitudes[0])
                                                        : quantum::xi_squared_expect(st));
            return;
          }
          std::vector<double> row{st.tau};
          for (int n = 0; n <= s.levels; ++n)
            row.push_back(n < st.nmax() ? std::norm(st.amplitudes[n]) : 0.0);
          row.push_back(quantum::xi_squared_expect(st));
          row.push_back(quantum::h_lo_expect(st));
          t.rows.push_back(std::move(row));
        },
        s.quantum);
    meta.emplace_back("final_nmax", std::to_string(info.final_nmax));
    meta.emplace_back("basis_doublings", std::to_string(info.doublings));
    meta.emplace_back("max_norm_drift", format_double(info.max_norm_drift));
    if (spectrum) {
      meta.emplace_back("signal", ts.label);
      const auto spec = spectral::power_spectrum(ts, s.window);
      out.files.emplace_back(stem + "_spectrum" + ext(s),
                             render_table(spectrum_table(meta, spec, s.window), s.format));
    } else {
      t.metadata = meta;
      out.files.emplace_back(stem + ext(s), render_table(t, s.format));
    }
  } catch (const std::exception& e) {
    out.failures.push_back(stem + ": " + e.what());
  }
  return out;
}

// --- scan -----------------------------------------------------------------

JobOutput scan_output(const Scenario& s, int workers) {
  JobOutput out;
  scan::ScanScenario sc;
  sc.N = s.N;
  sc.delta = s.delta;
  sc.eta = s.eta;
  sc.init = s.initial.front();
  sc.tau_lyapunov = s.tau_lyapunov;
  sc.tau_spectrum = s.tau_spectrum;
  sc.dtau_spectrum = s.dtau_spectrum;
  sc.window = s.window;
  sc.lyapunov = s.lyapunov;
  const auto rows = scan::chaos_scan(s.epsilons, sc, workers);
  csv::Table t;
  t.metadata = common_meta(s);
  t.metadata.insert(t.metadata.end(),
                    {{"eta", format_double(s.eta)},
                     {"N", std::to_string(s.N)},
                     {"delta", format_double(s.delta)},
                     {"xi0", format_double(sc.init.xi)},
                     {"v0", format_double(sc.init.v)},
                     {"tau_lyapunov", format_double(s.tau_lyapunov)},
                     {"tau_spectrum", format_double(s.tau_spectrum)},
                     {"dtau_spectrum", format_double(s.dtau_spectrum)},
                     {"lyapunov_offset", format_double(s.lyapunov.offset)},
                     {"renorm_interval", format_double(s.lyapunov.renorm_interval)},
                     {"discard_fraction", format_double(s.lyapunov.discard_fraction)}});
  const auto cross = scan::indicator_crossover(rows);
  t.metadata.emplace_back("lyapunov_crossover", cross ? format_double(*cross) : "none");
  t.columns = {"epsilon", "lyapunov", "spectral_entropy"};
  t.note_column = "error";
  for (const auto& r : rows) {
    t.rows.push_back({r.epsilon, r.lyapunov, r.spectral_entropy});
    t.row_notes.push_back(r.error);
  }
  out.files.emplace_back(s.name + ext(s), render_table(t, s.format));
  return out;
}

nlohmann::json complex_matrix(const Eigen::Matrix3cd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < 3; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < 3; ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::string epsilon_tag(double epsilon) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "eps%g", epsilon);
  return buf;
}

std::string render_table(const csv::Table& t, OutputFormat format) {
  if (format == OutputFormat::csv) {
    std::ostringstream os;
    csv::write(os, t);
    return os.str();
  }
  nlohmann::json j;
  nlohmann::json meta = nlohmann::json::object();
  for (const auto& [k, v] : t.metadata) meta[k] = v;
  j["metadata"] = meta;
  j["columns"] = t.columns;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    nlohmann::json row = nlohmann::json::array();
    for (double x : r) row.push_back(std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr));
    rows.push_back(row);
  }
  j["rows"] = rows;
  if (!t.note_column.empty()) j[t.note_column] = t.row_notes;
  return j.dump(1) + "\n";
}

nlohmann::json raman_report() {
  using raman::Sublevel;
  nlohmann::json j;
  nlohmann::json tensors = nlohmann::json::array();
  double worst = 0.0;
  for (Sublevel mu : {Sublevel::one, Sublevel::two}) {
    for (Sublevel nu : {Sublevel::one, Sublevel::two}) {
      const auto closed = raman::lambda_tensor(mu, nu);
      const auto brute = raman::lambda_tensor_from_3j(mu, nu);
      const double diff = (closed - brute).cwiseAbs().maxCoeff();
      worst = std::max(worst, diff);
      tensors.push_back({{"mu", static_cast<int>(mu)},
                         {"nu", static_cast<int>(nu)},
                         {"closed_form", complex_matrix(closed)},
                         {"three_j_sum", complex_matrix(brute)},
                         {"max_abs_difference", diff}});
    }
  }
  j["lambda"] = tensors;
  j["max_abs_difference"] = worst;
  j["tolerance"] = 1e-14;
  j["pass"] = worst <= 1e-14;
  const PhysicalConfig cfg;
  const double chi = raman::chi(cfg.einstein_A, cfg.k0, cfg.detuning);
  const double E = raman::field_amplitude(cfg.laser_power, cfg.spot_size);
  j["default_setup"] = {{"chi", chi},
                        {"field_amplitude", E},
                        {"standing_wave_amplitude", 2.0 * chi * E * E * cfg.amplitude_ratio}};
  return j;
}

RunReport run_scenario(const Scenario& s, const std::filesystem::path& out_dir, int workers) {
  if (workers < 1) throw std::invalid_argument("worker count must be >= 1");
  std::filesystem::create_directories(out_dir);
  std::vector<JobOutput> jobs;
  switch (s.kind) {
    case Kind::chaos_scan:
      jobs.push_back(scan_output(s, workers));
      break;
    case Kind::raman_check: {
      JobOutput o;
      const auto report = raman_report();
      o.files.emplace_back(s.name + ".json", report.dump(1) + "\n");
      if (!report["pass"].get<bool>()) o.failures.push_back("lambda tensors disagree with the 3-j sums");
      jobs.push_back(std::move(o));
      break;
    }
    default:
      jobs = parallel_map<JobOutput>(s.epsilons.size(), workers, [&](std::size_t i) {
        const double eps = s.epsilons[i];
        try {
          switch (s.kind) {
            case Kind::poincare: return poincare_job(s, eps);
            case Kind::quantum_probabilities:
            case Kind::quantum_spectrum:
            case Kind::expectation_values: return quantum_job(s, eps);
            default: return classical_job(s, eps);
          }
        } catch (const std::exception& e) {
          JobOutput o;
          o.failures.push_back(s.name + "_" + epsilon_tag(eps) + ": " + e.what());
          return o;
        }
      });
  }

  RunReport report;
  for (const auto& job : jobs) {
    for (const auto& [name, contents] : job.files) {
      const auto path = out_dir / name;
      std::ofstream os(path, std::ios::binary);
      if (!os) throw std::runtime_error("cannot write " + path.string());
      os << contents;
      os.close();
      if (!os) throw std::runtime_error("write failed: " + path.string());
      report.files.push_back({name, sha256_hex(contents), contents.size()});
    }
    report.failures.insert(report.failures.end(), job.failures.begin(), job.failures.end());
  }
  const auto manifest = make_manifest(s, report.files, report.failures);
  std::ofstream os(out_dir / manifest_name, std::ios::binary);
  os << manifest.dump(2) << "\n";
  if (!os) throw std::runtime_error("cannot write the manifest");
  return report;
}

}  // namespace ionchaos::app
