#include "eaas/experiment/config.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

#include "eaas/error.hpp"

namespace eaas::experiment {

namespace {

using json = nlohmann::json;

net::NetworkModel network_from(const json& j, net::NetworkModel m) {
  m.one_way_delay_ms = j.value("one_way_delay_ms", m.one_way_delay_ms);
  m.jitter_ms = j.value("jitter_ms", m.jitter_ms);
  m.mtu_payload = j.value("mtu_payload", m.mtu_payload);
  return m;
}

json network_to(const net::NetworkModel& m) {
  return {{"one_way_delay_ms", m.one_way_delay_ms}, {"jitter_ms", m.jitter_ms}, {"mtu_payload", m.mtu_payload}};
}

}  // namespace

void ExperimentConfig::validate(const pqc::Catalog& catalog) const {
  device.validate();
  eaas.link.validate();
  net_local.validate();
  net_remote.validate();
  if (repetitions < 2) throw Error(Errc::invalid_argument, "repetitions must be at least 2");
  if (kem_list.empty()) throw Error(Errc::invalid_argument, "kem_list is empty");
  if (!(eaas.h_min >= 0.0 && eaas.h_min <= 1.0)) throw Error(Errc::invalid_argument, "h_min must lie in [0, 1]");
  for (const auto& k : kem_list) {
    if (!catalog.contains(pqc::Kind::kem, k)) throw Error(Errc::invalid_argument, "unknown KEM '" + k + "'");
  }
  if (!catalog.contains(pqc::Kind::dsa, dsa)) throw Error(Errc::invalid_argument, "unknown DSA '" + dsa + "'");
}

ExperimentConfig config_from_json(std::string_view text, const std::filesystem::path& base_dir) {
  ExperimentConfig c;
  try {
    const auto j = json::parse(text);
    if (j.contains("device")) {
      const auto& d = j["device"];
      c.device.device_id = d.value("device_id", c.device.device_id);
      c.device.rate_bps = d.value("rate_bps", c.device.rate_bps);
      c.device.p_one = d.value("p_one", c.device.p_one);
      c.device.seed = d.value("seed", c.device.seed);
      c.device.health_claim = d.value("health_claim", c.device.health_claim);
      c.device.window_bits = d.value("window_bits", c.device.window_bits);
    }
    if (j.contains("eaas")) {
      const auto& e = j["eaas"];
      if (e.contains("listen")) c.eaas.listen = net::Endpoint::parse(e["listen"].get<std::string>());
      if (e.contains("metrics") && !e["metrics"].is_null()) {
        c.eaas.metrics = net::Endpoint::parse(e["metrics"].get<std::string>());
      }
      c.eaas.h_min = e.value("h_min", c.eaas.h_min);
      if (e.contains("link")) c.eaas.link = network_from(e["link"], c.eaas.link);
    }
    if (j.contains("catalog_path")) {
      std::filesystem::path p = j["catalog_path"].get<std::string>();
      c.catalog_path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    }
    if (j.contains("kem_list")) c.kem_list = j["kem_list"].get<std::vector<std::string>>();
    c.dsa = j.value("dsa", c.dsa);
    if (j.contains("mode")) c.mode = tls::parse_mode(j["mode"].get<std::string>());
    c.mutual_auth = j.value("mutual_auth", c.mutual_auth);
    if (j.contains("net_local")) c.net_local = network_from(j["net_local"], c.net_local);
    if (j.contains("net_remote")) c.net_remote = network_from(j["net_remote"], c.net_remote);
    c.repetitions = j.value("repetitions", c.repetitions);
    if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
    c.seed = j.value("seed", c.seed);
    c.parallel = j.value("parallel", c.parallel);
  } catch (const json::exception& e) {
    throw Error(Errc::invalid_argument, std::string("experiment config: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str(), path.parent_path());
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["device"] = {{"device_id", c.device.device_id}, {"rate_bps", c.device.rate_bps},
                 {"p_one", c.device.p_one},         {"seed", c.device.seed},
                 {"health_claim", c.device.health_claim}, {"window_bits", c.device.window_bits}};
  j["eaas"] = {{"listen", c.eaas.listen.to_string()},
               {"metrics", c.eaas.metrics ? json(c.eaas.metrics->to_string()) : json(nullptr)},
               {"h_min", c.eaas.h_min},
               {"link", network_to(c.eaas.link)}};
  j["catalog_path"] = c.catalog_path.string();
  j["kem_list"] = c.kem_list;
  j["dsa"] = c.dsa;
  j["mode"] = std::string(tls::to_string(c.mode));
  j["mutual_auth"] = c.mutual_auth;
  j["net_local"] = network_to(c.net_local);
  j["net_remote"] = network_to(c.net_remote);
  j["repetitions"] = c.repetitions;
  j["output_dir"] = c.output_dir.string();
  j["seed"] = c.seed;
  j["parallel"] = c.parallel;
  return j.dump(2);
}

}  // namespace eaas::experiment
