#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "locc/recovery.hpp"
#include "locc/spectrum.hpp"

namespace locc::io {

inline constexpr const char* kToolVersion = "0.1.0";

/// State file: {"label": optional string, "schmidt": [floats]}.
/// Entries may arrive unsorted; construction sorts and validates them.
struct StateFile {
  std::vector<double> schmidt;
  std::optional<std::string> label;
};

StateFile load_state(const std::filesystem::path& file);
void save_state(const std::filesystem::path& file, const std::vector<double>& schmidt,
                const std::string& label);

/// Flattened certificate: everything needed to re-verify the recovery from
/// the file alone, plus provenance (labels, tool version, tolerance). The
/// timestamp is emitted only when SOURCE_DATE_EPOCH is set so that repeated
/// runs stay byte-identical.
struct CertificateRecord {
  std::vector<double> psi;
  std::vector<double> phi;
  std::vector<double> chi;
  std::vector<double> omega;
  int k = 0;
  double recovered_nats = 0.0;
  double loss_nats = 0.0;
  bool genuine = false;
  int efficient_bound = 0;
  double tol = 1e-12;
  std::optional<std::string> psi_label;
  std::optional<std::string> phi_label;
  std::optional<Perturbation> perturbation;
  std::string version = kToolVersion;
};

CertificateRecord make_record(const SchmidtVector& psi, const SchmidtVector& phi,
                              const RecoveryCertificate& cert, Tolerance tol,
                              std::optional<std::string> psi_label,
                              std::optional<std::string> phi_label);

std::string to_json(const CertificateRecord& rec);
void save_certificate(const std::filesystem::path& file, const CertificateRecord& rec);
CertificateRecord load_certificate(const std::filesystem::path& file);

}  // namespace locc::io
