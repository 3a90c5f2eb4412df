// Entropy-as-a-Service daemon backed by the simulated QRNG.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "eaas/experiment/config.hpp"
#include "eaas/protocol/server.hpp"
#include "tool_support.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Serve QRNG entropy over the length-prefixed JSON protocol"};
  std::string listen = "127.0.0.1:7000";
  std::string metrics;
  std::string device_config;
  double h_min = 0.9;
  double delay_ms = 0.0;
  double jitter_ms = 0.0;
  app.add_option("--listen", listen, "host:port for entropy requests");
  app.add_option("--metrics", metrics, "host:port for GET /metrics (disabled when empty)");
  app.add_option("--h-min", h_min, "minimum window min-entropy per bit before failing closed")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--device-config", device_config, "experiment config JSON whose \"device\" object is used");
  app.add_option("--delay-ms", delay_ms, "emulated one-way link delay")->check(CLI::NonNegativeNumber);
  app.add_option("--jitter-ms", jitter_ms, "uniform jitter on the link delay")->check(CLI::NonNegativeNumber);
  CLI11_PARSE(app, argc, argv);

  tools::block_shutdown_signals();
  return tools::guarded([&] {
    eaas::entropy::DeviceModel model;
    if (!device_config.empty()) model = eaas::experiment::load_config(device_config).device;
    auto device = std::make_shared<eaas::entropy::EntropyDevice>(model);

    eaas::protocol::ServeConfig cfg;
    cfg.h_min = h_min;
    cfg.listen = eaas::net::Endpoint::parse(listen);
    if (!metrics.empty()) cfg.metrics_listen = eaas::net::Endpoint::parse(metrics);
    cfg.link.one_way_delay_ms = delay_ms;
    cfg.link.jitter_ms = jitter_ms;
    auto server = eaas::protocol::serve(cfg, device);

    std::printf("eaas listening on %s\n", server->endpoint().to_string().c_str());
    if (auto m = server->metrics_endpoint()) std::printf("metrics on http://%s/metrics\n", m->to_string().c_str());
    std::fflush(stdout);
    tools::wait_for_shutdown_signal();
    server->stop();
    std::fputs(server->metrics_snapshot().c_str(), stdout);
    return 0;
  });
}
