#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eaas/entropy/device.hpp"
#include "eaas/net/network_model.hpp"
#include "eaas/net/socket.hpp"
#include "eaas/pqc/catalog.hpp"
#include "eaas/tls/messages.hpp"

namespace eaas::experiment {

struct EaasSettings {
  net::Endpoint listen{"127.0.0.1", 0};
  std::optional<net::Endpoint> metrics;
  double h_min = 0.9;
  // One-way delay between each endpoint and the entropy service.
  net::NetworkModel link{15.0, 0.5, 1448};

  bool operator==(const EaasSettings&) const = default;
};

struct ExperimentConfig {
  entropy::DeviceModel device;
  EaasSettings eaas;
  std::filesystem::path catalog_path = pqc::default_catalog_path();
  std::vector<std::string> kem_list{"p384_kyber768", "p384_bikel3", "p384_hqc192", "p384_frodo976aes",
                                    "p384_frodo976shake"};
  std::string dsa = "p384_dilithium3";
  tls::KeyExchangeMode mode = tls::KeyExchangeMode::client_encapsulates;
  bool mutual_auth = false;
  // Client-server links of the two scenarios.
  net::NetworkModel net_local{40.0, 1.0, 1448};
  net::NetworkModel net_remote{100.0, 2.0, 1448};
  int repetitions = 30;
  std::filesystem::path output_dir = "results";
  std::uint64_t seed = 1;  // PKI provisioning and delay samplers
  bool parallel = true;    // one client thread per KEM

  // Throws invalid-argument naming the first problem.
  void validate(const pqc::Catalog& catalog) const;
};

// Missing keys keep their defaults. A relative catalog_path is resolved
// against `base_dir`.
ExperimentConfig config_from_json(std::string_view text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& config);

}  // namespace eaas::experiment
