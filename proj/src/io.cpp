#include "locc/io.hpp"

#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <fstream>

#include <json.hpp>

#include "locc/errors.hpp"

namespace locc::io {
namespace {

using nlohmann::json;

json read_json_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  json j;
  in >> j;
  return j;
}

void write_text_file(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << text;
}

std::optional<std::string> source_date_timestamp() {
  const char* env = std::getenv("SOURCE_DATE_EPOCH");
  if (!env) return std::nullopt;
  const std::time_t t = static_cast<std::time_t>(std::strtoll(env, nullptr, 10));
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return std::string(buf);
}

}  // namespace

StateFile load_state(const std::filesystem::path& file) {
  const json j = read_json_file(file);
  if (!j.is_object() || !j.contains("schmidt") || !j["schmidt"].is_array())
    throw std::runtime_error(file.string() + ": expected {\"schmidt\": [..]}");
  StateFile s;
  s.schmidt = j["schmidt"].get<std::vector<double>>();
  if (j.contains("label")) s.label = j["label"].get<std::string>();
  return s;
}

void save_state(const std::filesystem::path& file, const std::vector<double>& schmidt,
                const std::string& label) {
  json j;
  j["label"] = label;
  j["schmidt"] = schmidt;
  write_text_file(file, j.dump(2) + "\n");
}

CertificateRecord make_record(const SchmidtVector& psi, const SchmidtVector& phi,
                              const RecoveryCertificate& cert, Tolerance tol,
                              std::optional<std::string> psi_label,
                              std::optional<std::string> phi_label) {
  CertificateRecord rec;
  rec.psi = psi.values();
  rec.phi = phi.values();
  rec.chi = cert.pair.chi.values();
  rec.omega = cert.pair.omega.values();
  rec.k = static_cast<int>(cert.pair.k);
  rec.recovered_nats = cert.recovered;
  rec.loss_nats = cert.loss;
  rec.genuine = cert.genuine;
  rec.efficient_bound = cert.efficient_bound;
  rec.tol = tol.eq_tol;
  rec.psi_label = std::move(psi_label);
  rec.phi_label = std::move(phi_label);
  rec.perturbation = cert.pair.perturbation;
  return rec;
}

std::string to_json(const CertificateRecord& rec) {
  json j;
  j["version"] = rec.version;
  j["psi"] = rec.psi;
  j["phi"] = rec.phi;
  j["chi"] = rec.chi;
  j["omega"] = rec.omega;
  j["k"] = rec.k;
  j["recovered_nats"] = rec.recovered_nats;
  j["loss_nats"] = rec.loss_nats;
  j["genuine"] = rec.genuine;
  j["efficient_bound"] = rec.efficient_bound;
  j["tol"] = rec.tol;
  if (rec.psi_label) j["psi_label"] = *rec.psi_label;
  if (rec.phi_label) j["phi_label"] = *rec.phi_label;
  if (rec.perturbation) {
    j["perturbation"] = {{"donor", rec.perturbation->donor},
                         {"epsilon", rec.perturbation->epsilon}};
  }
  if (const auto ts = source_date_timestamp()) j["timestamp"] = *ts;
  return j.dump(2) + "\n";
}

void save_certificate(const std::filesystem::path& file, const CertificateRecord& rec) {
  write_text_file(file, to_json(rec));
}

CertificateRecord load_certificate(const std::filesystem::path& file) {
  const json j = read_json_file(file);
  CertificateRecord rec;
  rec.psi = j.at("psi").get<std::vector<double>>();
  rec.phi = j.at("phi").get<std::vector<double>>();
  rec.chi = j.at("chi").get<std::vector<double>>();
  rec.omega = j.at("omega").get<std::vector<double>>();
  rec.k = j.at("k").get<int>();
  rec.recovered_nats = j.at("recovered_nats").get<double>();
  rec.loss_nats = j.at("loss_nats").get<double>();
  rec.genuine = j.at("genuine").get<bool>();
  rec.efficient_bound = j.at("efficient_bound").get<int>();
  rec.tol = j.at("tol").get<double>();
  if (j.contains("psi_label")) rec.psi_label = j["psi_label"].get<std::string>();
  if (j.contains("phi_label")) rec.phi_label = j["phi_label"].get<std::string>();
  if (j.contains("perturbation")) {
    Perturbation p;
    p.donor = j["perturbation"].at("donor").get<std::size_t>();
    p.epsilon = j["perturbation"].at("epsilon").get<double>();
    rec.perturbation = p;
  }
  if (j.contains("version")) rec.version = j["version"].get<std::string>();
  return rec;
}

}  // namespace locc::io
