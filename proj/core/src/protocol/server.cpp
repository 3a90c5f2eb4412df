#include "eaas/protocol/server.hpp"

#include <httplib.h>

#include <bit>
#include <cstdio>
#include <thread>

#include "eaas/error.hpp"
#include "eaas/net/tcp_service.hpp"
#include "eaas/protocol/frame.hpp"

namespace eaas::protocol {

namespace {

// Atomic doubles are stored as their bit pattern.
class AtomicDouble {
 public:
  void store(double v) noexcept { bits_.store(std::bit_cast<std::uint64_t>(v)); }
  double load() const noexcept { return std::bit_cast<double>(bits_.load()); }

 private:
  std::atomic<std::uint64_t> bits_{0};
};

}  // namespace

struct EaasServer::Impl {
  ServeConfig config;
  std::shared_ptr<entropy::EntropyDevice> device;
  std::atomic<bool> stopped{false};
  std::atomic<std::uint64_t> requests{0};
  std::atomic<std::uint64_t> bytes_served{0};
  std::atomic<std::uint64_t> below_threshold{0};
  std::atomic<std::uint64_t> errors{0};
  AtomicDouble min_entropy_last;
  AtomicDouble q_factor_last;
  AtomicDouble t_gen_last;

  std::unique_ptr<net::TcpService> service;

  std::unique_ptr<httplib::Server> http;
  std::thread http_thread;
  std::optional<net::Endpoint> metrics_bound;

  Impl(ServeConfig cfg, std::shared_ptr<entropy::EntropyDevice> dev)
      : config(std::move(cfg)), device(std::move(dev)) {}

  MetricsCounters snapshot() const {
    MetricsCounters c;
    c.requests_total = requests.load();
    c.bytes_served_total = bytes_served.load();
    c.below_threshold_total = below_threshold.load();
    c.errors_total = errors.load();
    c.min_entropy_last = min_entropy_last.load();
    c.q_factor_last = q_factor_last.load();
    c.t_gen_us_last = t_gen_last.load();
    return c;
  }

  EntropyResponse handle(const EntropyRequest& req) {
    EntropyResponse resp;
    resp.req_id = req.req_id;
    resp.device_id = device->model().device_id;
    requests.fetch_add(1);

    if (req.n_bytes > config.max_request_bytes) {
      resp.status = ResponseStatus::error;
      resp.error = "cap-exceeded";
      errors.fetch_add(1);
      return resp;
    }
    try {
      auto block = device->generate(req.n_bytes);
      resp.quality = block.quality;
      resp.t_gen_us = block.t_gen_us;
      min_entropy_last.store(block.quality.min_entropy_per_bit);
      q_factor_last.store(block.quality.q_factor);
      t_gen_last.store(block.t_gen_us);
      if (!block.quality.health_ok || block.quality.min_entropy_per_bit < config.h_min) {
        // Fail closed: the generated block is discarded, never sent.
        resp.status = ResponseStatus::below_threshold;
        below_threshold.fetch_add(1);
        return resp;
      }
      resp.data = std::move(block.data);
      resp.status = ResponseStatus::ok;
      bytes_served.fetch_add(resp.data.size());
    } catch (const Error& e) {
      resp.status = ResponseStatus::error;
      resp.error = std::string(to_string(e.code()));
      errors.fetch_add(1);
    }
    return resp;
  }

  void serve_connection(net::Socket& socket, std::uint64_t index) {
    net::DelaySampler link(config.link, config.link_seed + index);
    try {
      while (!stopped.load()) {
        Message msg = read_frame(socket);
        const auto* req = std::get_if<EntropyRequest>(&msg);
        if (req == nullptr) {
          EntropyResponse bad;
          bad.status = ResponseStatus::error;
          bad.error = "malformed-frame";
          bad.device_id = device->model().device_id;
          errors.fetch_add(1);
          write_frame(socket, bad);
          continue;
        }
        net::sleep_for_delay(link.next());  // inbound transit
        auto resp = handle(*req);
        net::apply_delay(link, [&] { write_frame(socket, resp); });
      }
    } catch (const Error&) {
      // Peer closed, malformed length prefix, or shutdown; drop the connection.
    }
  }

  void start_metrics() {
    if (!config.metrics_listen) return;
    http = std::make_unique<httplib::Server>();
    http->Get("/metrics", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(render_metrics(snapshot()), "text/plain; version=0.0.4");
    });
    const auto& ep = *config.metrics_listen;
    int port = ep.port;
    if (port == 0) {
      port = http->bind_to_any_port(ep.host);
    } else if (!http->bind_to_port(ep.host, port)) {
      port = -1;
    }
    if (port < 0) throw Error(Errc::startup, "cannot bind metrics listener " + ep.to_string());
    metrics_bound = net::Endpoint{ep.host, static_cast<std::uint16_t>(port)};
    http_thread = std::thread([this] { http->listen_after_bind(); });
    http->wait_until_ready();
  }

  void stop() {
    if (stopped.exchange(true)) return;
    if (service) service->stop();
    if (http) {
      http->stop();
      if (http_thread.joinable()) http_thread.join();
    }
  }
};

EaasServer::EaasServer(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}

EaasServer::~EaasServer() { stop(); }

const net::Endpoint& EaasServer::endpoint() const noexcept { return impl_->service->endpoint(); }

std::optional<net::Endpoint> EaasServer::metrics_endpoint() const { return impl_->metrics_bound; }

MetricsCounters EaasServer::counters() const { return impl_->snapshot(); }

std::string EaasServer::metrics_snapshot() const { return render_metrics(impl_->snapshot()); }

void EaasServer::stop() {
  if (impl_) impl_->stop();
}

std::unique_ptr<EaasServer> serve(ServeConfig config,
                                  std::shared_ptr<entropy::EntropyDevice> device) {
  if (!device) throw Error(Errc::startup, "no entropy device");
  config.link.validate();
  auto impl = std::make_unique<EaasServer::Impl>(std::move(config), std::move(device));
  impl->start_metrics();
  auto* raw = impl.get();
  raw->service = std::make_unique<net::TcpService>(
      raw->config.listen, [raw](net::Socket& s, std::uint64_t i) { raw->serve_connection(s, i); });
  return std::unique_ptr<EaasServer>(new EaasServer(std::move(impl)));
}

std::string render_metrics(const MetricsCounters& c) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "eaas_requests_total %llu\n"
                "eaas_bytes_served_total %llu\n"
                "qrng_min_entropy_last %.6f\n"
                "qrng_q_factor_last %.6f\n"
                "eaas_below_threshold_total %llu\n"
                "eaas_t_gen_us_last %.6f\n"
                "eaas_errors_total %llu\n",
                static_cast<unsigned long long>(c.requests_total),
                static_cast<unsigned long long>(c.bytes_served_total), c.min_entropy_last,
                c.q_factor_last, static_cast<unsigned long long>(c.below_threshold_total),
                c.t_gen_us_last, static_cast<unsigned long long>(c.errors_total));
  return buf;
}

}  // namespace eaas::protocol
