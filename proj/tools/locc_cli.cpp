// Command-line front end: convertibility checks, recovery synthesis,
// epsilon bounds, brute-force scans and pair generation.
//
// Exit codes: 0 success / 1 not convertible or infeasible / 2 input error /
// 3 open problem / 4 budget, pattern or search failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "locc/errors.hpp"
#include "locc/genpairs.hpp"
#include "locc/io.hpp"
#include "locc/majorization.hpp"
#include "locc/oracle.hpp"
#include "locc/recovery.hpp"
#include "locc/spectrum.hpp"

namespace {

using namespace locc;

constexpr double kLn2 = 0.6931471805599453;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string vec_str(const std::vector<double>& v) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << fmt("%.12g", v[i]);
  }
  os << "]";
  return os.str();
}

std::string delta_str(const std::vector<int>& delta) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < delta.size(); ++i) {
    if (i) os << ",";
    os << delta[i];
  }
  os << "}";
  return os.str();
}

std::string energy_str(double nats, bool bits) {
  return bits ? fmt("%.6f", nats / kLn2) + " bits" : fmt("%.6f", nats) + " nats";
}

struct LoadedPair {
  SchmidtVector psi;
  SchmidtVector phi;
  std::optional<std::string> psi_label;
  std::optional<std::string> phi_label;
};

LoadedPair load_pair(const std::string& psi_file, const std::string& phi_file, Tolerance tol) {
  const io::StateFile a = io::load_state(psi_file);
  const io::StateFile b = io::load_state(phi_file);
  SchmidtVector psi = make_schmidt(a.schmidt, tol);
  SchmidtVector phi = make_schmidt(b.schmidt, tol);
  if (psi.dim() != phi.dim()) {
    const std::size_t n = std::max(psi.dim(), phi.dim());
    std::cout << "note: padded " << (psi.dim() < n ? "psi" : "phi") << " with zeros to dimension "
              << n << "\n";
    psi = psi.padded(n);
    phi = phi.padded(n);
  }
  return LoadedPair{std::move(psi), std::move(phi), a.label, b.label};
}

int run_check_pair(const std::string& psi_file, const std::string& phi_file, Tolerance tol,
                   bool bits) {
  const LoadedPair in = load_pair(psi_file, phi_file, tol);
  const PairClass cls = classify_pair(in.psi, in.phi, tol);
  if (cls.kind == PairKind::Incomparable) {
    const MajorizationReport rep = majorize(in.psi, in.phi, tol);
    std::cout << "convertible: no\n";
    std::cout << "first_violation: m=" << *rep.first_violation << "\n";
    std::cout << "tol: " << fmt("%g", tol.eq_tol) << "\n";
    return 1;
  }
  std::cout << "convertible: yes\n";
  std::cout << "class: " << to_string(cls.kind) << "\n";
  std::cout << "delta: " << delta_str(cls.delta) << "\n";
  std::cout << "eta: " << cls.eta << "\n";
  std::cout << "loss: " << energy_str(entropy(in.psi) - entropy(in.phi), bits) << "\n";
  if (cls.kind != PairKind::Identical)
    std::cout << "min_aux_dim: " << dimension_lower_bound(in.psi, in.phi, tol) << "\n";
  std::cout << "tol: " << fmt("%g", tol.eq_tol) << "\n";
  return 0;
}

int run_check_cert(const std::string& cert_file, std::optional<double> tol_override) {
  const io::CertificateRecord rec = io::load_certificate(cert_file);
  const Tolerance tol(tol_override.value_or(rec.tol));
  const SchmidtVector psi = make_schmidt(rec.psi, tol);
  const SchmidtVector phi = make_schmidt(rec.phi, tol);
  const SchmidtVector chi = make_schmidt(rec.chi, tol);
  const SchmidtVector omega = make_schmidt(rec.omega, tol);
  const RecoveryCertificate cert = verify_recovery(psi, phi, chi, omega, tol);
  const bool numbers_match = std::abs(cert.recovered - rec.recovered_nats) <= 1e-9 &&
                             std::abs(cert.loss - rec.loss_nats) <= 1e-9 &&
                             static_cast<int>(cert.pair.k) == rec.k;
  if (!numbers_match) {
    std::cout << "certificate: invalid (recorded numbers disagree with re-verification)\n";
    return 1;
  }
  std::cout << "certificate: valid\n";
  std::cout << "k: " << rec.k << "\n";
  std::cout << "recovered: " << fmt("%.6f", cert.recovered) << " nats\n";
  std::cout << "loss: " << fmt("%.6f", cert.loss) << " nats\n";
  std::cout << "genuine: " << (cert.genuine ? "yes" : "no") << "\n";
  std::cout << "tol: " << fmt("%g", tol.eq_tol) << "\n";
  return 0;
}

int run_recover(const std::string& psi_file, const std::string& phi_file,
                const RecoverOptions& opts, bool bits, const std::string& out_file) {
  const LoadedPair in = load_pair(psi_file, phi_file, opts.tol);
  const RecoveryOutcome outcome = recover_general(in.psi, in.phi, opts);
  if (std::holds_alternative<NotConvertible>(outcome)) {
    std::cout << "outcome: not-convertible\n";
    return 1;
  }
  if (const auto* open = std::get_if<OpenProblem>(&outcome)) {
    std::cout << "outcome: open-problem\n";
    std::cout << "reason: " << open->reason << "\n";
    return 3;
  }
  if (const auto* imp = std::get_if<ImpossibleAtDim>(&outcome)) {
    std::cout << "outcome: impossible-at-dim\n";
    std::cout << "reason: " << imp->reason << "\n";
    return 1;
  }
  const RecoveryCertificate& cert = std::get<Found>(outcome).certificate;
  std::cout << "outcome: found\n";
  std::cout << "k: " << cert.pair.k << "\n";
  std::cout << "chi: " << vec_str(cert.pair.chi.values()) << "\n";
  std::cout << "omega: " << vec_str(cert.pair.omega.values()) << "\n";
  std::cout << "recovered: " << energy_str(cert.recovered, bits) << "\n";
  std::cout << "loss: " << energy_str(cert.loss, bits) << "\n";
  std::cout << "genuine: " << (cert.genuine ? "yes" : "no") << "\n";
  std::cout << "min_aux_dim: " << cert.efficient_bound << "\n";
  std::cout << "tol: " << fmt("%g", opts.tol.eq_tol) << "\n";
  if (!out_file.empty()) {
    io::save_certificate(out_file,
                         io::make_record(in.psi, in.phi, cert, opts.tol, in.psi_label, in.phi_label));
    std::cout << "certificate: " << out_file << "\n";
  }
  return 0;
}

int run_epsmax(const std::string& psi_file, const std::string& phi_file, double p, Tolerance tol) {
  const LoadedPair in = load_pair(psi_file, phi_file, tol);
  if (!(p > 0.5 && p < 1.0)) throw std::invalid_argument("--p must lie in (1/2, 1)");
  const SchmidtVector chi = make_schmidt({p, 1.0 - p}, tol);
  const double eps = epsilon_max(in.psi, in.phi, chi, 0, 1, tol);
  std::cout << fmt("%.9f", eps) << "\n";
  return 0;
}

int run_scan(const std::string& psi_file, const std::string& phi_file, std::size_t kmax,
             const GridSpec& grid, Tolerance tol, const std::string& csv_file) {
  const LoadedPair in = load_pair(psi_file, phi_file, tol);
  const ScanResult res = max_recovery_scan(in.psi, in.phi, kmax, grid, tol);
  if (res.not_convertible) {
    std::cerr << "pair is not convertible; nothing to scan\n";
    return 1;
  }
  std::ostringstream csv;
  csv << "k,best_recovered_nats,feasible_count,points_tested\n";
  for (const PerKRow& row : res.per_k)
    csv << row.k << "," << fmt("%.9f", row.best_recovered) << "," << row.feasible_count << ","
        << row.points_tested << "\n";
  if (csv_file.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(csv_file);
    if (!out) throw std::runtime_error("cannot write " + csv_file);
    out << csv.str();
    std::cout << "csv: " << csv_file << "\n";
  }
  return 0;
}

int run_gen(std::size_t n, const std::string& pattern, std::uint64_t seed, double margin,
            const std::string& prefix) {
  PatternSpec spec;
  spec.n = n;
  spec.seed = seed;
  spec.strictness_margin = margin;
  if (pattern != "strict") {
    if (pattern.rfind("delta:", 0) != 0)
      throw std::invalid_argument("--pattern must be 'strict' or 'delta:<comma list>'");
    std::stringstream ss(pattern.substr(6));
    std::string tok;
    while (std::getline(ss, tok, ',')) spec.delta.push_back(std::stoi(tok));
  }
  const auto [psi, phi] = pair_with_pattern(spec);
  std::ostringstream base;
  base << " n=" << n << " pattern=" << pattern << " seed=" << seed;
  const std::string psi_file = prefix + "_psi.json";
  const std::string phi_file = prefix + "_phi.json";
  io::save_state(psi_file, psi.values(), "psi" + base.str());
  io::save_state(phi_file, phi.values(), "phi" + base.str());
  const PairClass cls = classify_pair(psi, phi);
  std::cout << "wrote: " << psi_file << ", " << phi_file << "\n";
  std::cout << "class: " << to_string(cls.kind) << "\n";
  std::cout << "delta: " << delta_str(cls.delta) << "\n";
  return 0;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::Empty:
    case Errc::NegativeEntry:
    case Errc::NotNormalized:
    case Errc::DimensionMismatch:
      return 2;
    case Errc::BudgetExceeded:
    case Errc::PatternInfeasible:
    case Errc::SearchExhausted:
    case Errc::EmptyRegion:
      return 4;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LOCC convertibility checks and entanglement recovery synthesis"};
  app.require_subcommand(1);

  double tol_value = 1e-12;
  app.add_option("--tol", tol_value, "absolute tolerance on prefix sums")->capture_default_str();

  // check
  auto* check = app.add_subcommand("check", "decide convertibility / verify a certificate");
  std::string check_psi, check_phi, check_cert;
  bool check_bits = false;
  bool tol_given = false;
  check->add_option("psi", check_psi, "psi state file");
  check->add_option("phi", check_phi, "phi state file");
  check->add_option("--cert", check_cert, "certificate file to re-verify");
  check->add_flag("--bits", check_bits, "display entropies in bits");

  // recover
  auto* recover = app.add_subcommand("recover", "synthesize an auxiliary recovery pair");
  std::string rec_psi, rec_phi, rec_out;
  RecoverOptions rec_opts;
  double rec_fraction = 1.0;
  double rec_force_p = 0.0;
  bool rec_bits = false;
  recover->add_option("psi", rec_psi, "psi state file")->required();
  recover->add_option("phi", rec_phi, "phi state file")->required();
  recover->add_option("--epsilon-fraction", rec_fraction, "fraction of eps* used for omega")
      ->capture_default_str();
  recover->add_flag("--heuristic", rec_opts.heuristic, "unguaranteed scan on open-problem classes");
  recover->add_option("--seed", rec_opts.seed, "seed for randomized fallbacks")
      ->capture_default_str();
  recover->add_option("--samples", rec_opts.samples, "random fallback budget")
      ->capture_default_str();
  auto* force_p_opt = recover->add_option("--force-p", rec_force_p, "pin the 2x2 parameter p");
  recover->add_option("--out", rec_out, "write the certificate to this file");
  recover->add_flag("--bits", rec_bits, "display entropies in bits");

  // epsmax
  auto* epsmax = app.add_subcommand("epsmax", "maximal feasible perturbation at a given p");
  std::string eps_psi, eps_phi;
  double eps_p = 0.0;
  epsmax->add_option("psi", eps_psi, "psi state file")->required();
  epsmax->add_option("phi", eps_phi, "phi state file")->required();
  epsmax->add_option("--p", eps_p, "2x2 auxiliary parameter")->required();

  // scan
  auto* scan = app.add_subcommand("scan", "best recovered entropy per auxiliary dimension");
  std::string scan_psi, scan_phi, scan_csv;
  std::size_t scan_kmax = 3;
  GridSpec scan_grid;
  scan->add_option("psi", scan_psi, "psi state file")->required();
  scan->add_option("phi", scan_phi, "phi state file")->required();
  scan->add_option("--kmax", scan_kmax, "largest auxiliary dimension")->capture_default_str();
  scan->add_option("--resolution", scan_grid.resolution, "grid step for the 2x2 scan")
      ->capture_default_str();
  scan->add_option("--seed", scan_grid.seed, "seed for the random scans")->capture_default_str();
  scan->add_option("--samples", scan_grid.samples, "samples per dimension k >= 3")
      ->capture_default_str();
  scan->add_option("--max-points", scan_grid.max_points, "hard evaluation budget")
      ->capture_default_str();
  scan->add_option("--csv", scan_csv, "write the table to this file");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a comparable pair with a prescribed pattern");
  std::size_t gen_n = 4;
  std::string gen_pattern = "strict";
  std::uint64_t gen_seed = 1;
  double gen_margin = 0.01;
  std::string gen_prefix;
  gen->add_option("--n", gen_n, "dimension")->required();
  gen->add_option("--pattern", gen_pattern, "'strict' or 'delta:<comma list>'")
      ->capture_default_str();
  gen->add_option("--seed", gen_seed, "generator seed")->capture_default_str();
  gen->add_option("--margin", gen_margin, "minimum prefix gap at non-delta indices")
      ->capture_default_str();
  gen->add_option("--out-prefix", gen_prefix, "output file prefix")->required();

  try {
    app.parse(argc, argv);
    tol_given = app.count("--tol") > 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const Tolerance tol(tol_value);
    if (check->parsed()) {
      if (!check_cert.empty())
        return run_check_cert(check_cert,
                              tol_given ? std::optional<double>(tol_value) : std::nullopt);
      if (check_psi.empty() || check_phi.empty())
        throw std::invalid_argument("check needs two state files or --cert");
      return run_check_pair(check_psi, check_phi, tol, check_bits);
    }
    if (recover->parsed()) {
      rec_opts.tol = tol;
      rec_opts.epsilon_fraction = rec_fraction;
      if (force_p_opt->count() > 0) rec_opts.force_p = rec_force_p;
      return run_recover(rec_psi, rec_phi, rec_opts, rec_bits, rec_out);
    }
    if (epsmax->parsed()) return run_epsmax(eps_psi, eps_phi, eps_p, tol);
    if (scan->parsed()) return run_scan(scan_psi, scan_phi, scan_kmax, scan_grid, tol, scan_csv);
    if (gen->parsed()) return run_gen(gen_n, gen_pattern, gen_seed, gen_margin, gen_prefix);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: invalid JSON: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
