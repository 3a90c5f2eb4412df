#include "eaas/tls/handshake.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <mutex>
#include <random>

#include "eaas/error.hpp"
#include "eaas/net/tcp_service.hpp"
#include "eaas/pqc/dsa.hpp"
#include "eaas/pqc/kem.hpp"

namespace eaas::tls {

namespace {

using json = nlohmann::json;
using Clock = net::Clock;

constexpr std::string_view kServerVerifyLabel = "server-cert-verify";
constexpr std::string_view kClientVerifyLabel = "client-cert-verify";

Bytes concat(std::initializer_list<ByteView> parts) {
  Bytes out;
  for (auto p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

// Hello randoms are nonces, not key material; they come from a local PRNG
// so that the EaaS byte counter reflects KEM demand alone.
Bytes hello_random() {
  thread_local std::mt19937_64 rng{std::random_device{}()};
  Bytes out(kRandomSize);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  return out;
}

double elapsed_ms(Clock::time_point from, Clock::time_point to) {
  return std::chrono::duration<double, std::milli>(to - from).count();
}

// Message-level I/O over one connection, counting bytes per direction.
class Wire {
 public:
  Wire(net::Socket& socket, int io_timeout_ms) : socket_(socket), timeout_ms_(io_timeout_ms) {}

  void send(std::initializer_list<const Bytes*> messages) {
    Bytes all;
    for (const auto* m : messages) all.insert(all.end(), m->begin(), m->end());
    socket_.write_all(all);
    sent_ += all.size();
  }

  ParsedMessage receive() {
    const auto deadline = net::deadline_after(std::chrono::milliseconds(timeout_ms_));
    std::array<std::uint8_t, kMessageHeader> header{};
    socket_.read_exact(header, deadline);
    const std::size_t len = (std::size_t{header[1]} << 16) | (std::size_t{header[2]} << 8) | header[3];
    ParsedMessage msg{static_cast<MessageType>(header[0]), Bytes(len)};
    socket_.read_exact(msg.body, deadline);
    received_ += kMessageHeader + len;
    return msg;
  }

  // Receives a message of the given type; an alert or anything else aborts.
  ParsedMessage expect(MessageType type) {
    auto msg = receive();
    if (msg.type == MessageType::alert) {
      throw Error(Errc::transport, "peer alert: " + std::string(msg.body.begin(), msg.body.end()));
    }
    if (msg.type != type) {
      throw Error(Errc::malformed_frame, "expected " + std::string(to_string(type)) + ", got type " +
                                             std::to_string(static_cast<int>(msg.type)));
    }
    return msg;
  }

  // Best effort; the peer may already be gone.
  void alert(const std::string& reason) noexcept {
    try {
      const auto msg = frame_message(MessageType::alert, pqc::as_bytes(reason));
      socket_.write_all(msg);
    } catch (...) {
    }
  }

  std::uint64_t sent() const noexcept { return sent_; }
  std::uint64_t received() const noexcept { return received_; }

 private:
  net::Socket& socket_;
  int timeout_ms_;
  std::uint64_t sent_ = 0;
  std::uint64_t received_ = 0;
};

Bytes wire_bytes(const ParsedMessage& msg) { return frame_message(msg.type, msg.body); }

struct ClientHello {
  Bytes random;
  KeyExchangeMode mode = KeyExchangeMode::client_encapsulates;
  bool mutual = false;
  std::string kem;
  Bytes share;
};

Bytes encode_client_hello(const ClientHello& ch) {
  if (ch.kem.size() > 255) throw Error(Errc::invalid_argument, "KEM name too long");
  Bytes body = ch.random;
  body.push_back(static_cast<std::uint8_t>(ch.mode));
  body.push_back(ch.mutual ? kFlagMutualAuth : 0);
  body.push_back(static_cast<std::uint8_t>(ch.kem.size()));
  body.insert(body.end(), ch.kem.begin(), ch.kem.end());
  body.insert(body.end(), ch.share.begin(), ch.share.end());
  return body;
}

ClientHello decode_client_hello(ByteView body) {
  if (body.size() < kClientHelloFixed) throw Error(Errc::malformed_frame, "short ClientHello");
  ClientHello ch;
  ch.random.assign(body.begin(), body.begin() + kRandomSize);
  const auto mode = body[kRandomSize];
  if (mode > 1) throw Error(Errc::malformed_frame, "unknown key exchange mode");
  ch.mode = static_cast<KeyExchangeMode>(mode);
  ch.mutual = (body[kRandomSize + 1] & kFlagMutualAuth) != 0;
  const std::size_t name_len = body[kRandomSize + 2];
  if (body.size() < kClientHelloFixed + name_len) throw Error(Errc::malformed_frame, "short ClientHello");
  const auto* name = reinterpret_cast<const char*>(body.data() + kClientHelloFixed);
  ch.kem.assign(name, name_len);
  ch.share.assign(body.begin() + static_cast<std::ptrdiff_t>(kClientHelloFixed + name_len), body.end());
  return ch;
}

Bytes certificate_message(const std::vector<pki::Certificate>& chain) {
  std::vector<Bytes> encoded;
  encoded.reserve(chain.size());
  for (const auto& c : chain) encoded.push_back(c.encode());
  return frame_message(MessageType::certificate, encode_certificate_list(encoded));
}

// Accepts [leaf] or [leaf, root] where root is the pinned anchor. Returns
// the leaf.
pki::Certificate verify_presented_chain(const pqc::Catalog& catalog, ByteView body,
                                        const pki::Certificate& anchor) {
  std::vector<pki::Certificate> chain;
  try {
    for (const auto& enc : decode_certificate_list(body)) chain.push_back(pki::Certificate::decode(enc));
  } catch (const Error& e) {
    throw Error(Errc::chain_invalid, e.what());
  }
  if (chain.empty() || chain.size() > 2) throw Error(Errc::chain_invalid, "chain must hold 1 or 2 certificates");
  if (chain.size() == 2 && !(chain[1] == anchor)) {
    throw Error(Errc::chain_invalid, "presented root does not match the trust anchor");
  }
  if (!pki::verify_chain(catalog, chain[0], anchor)) {
    throw Error(Errc::chain_invalid, "leaf '" + chain[0].subject + "' does not verify under '" +
                                         anchor.subject + "'");
  }
  return chain[0];
}

bool verify_cert_verify(const pqc::Catalog& catalog, const pki::Certificate& leaf, std::string_view label,
                        ByteView transcript_hash, ByteView sig) {
  try {
    const auto& scheme = catalog.dsa(leaf.dsa_profile);
    return pqc::dsa_verify(scheme, leaf.subject_pk, concat({pqc::as_bytes(label), transcript_hash}), sig);
  } catch (const Error&) {
    return false;
  }
}

Bytes session_key(ByteView ss, ByteView th) { return pqc::xof({pqc::as_bytes("session"), ss, th}, 32); }

Bytes finished_mac(std::string_view side, ByteView key, ByteView th) {
  return pqc::xof({pqc::as_bytes(side), key, th}, kFinishedSize);
}

Bytes canary_for(ByteView key) { return pqc::xof({pqc::as_bytes("canary"), key}, 32); }

struct ServerLog {
  double t_eaas_ms = 0.0;
  double t_gen_us = 0.0;
  std::uint64_t random_bytes = 0;
  std::uint64_t bytes_rx = 0;
  std::uint64_t bytes_tx = 0;
  bool key_ok = false;
};

Bytes encode_server_log(const ServerLog& log) {
  const json j = {{"t_eaas_ms", log.t_eaas_ms}, {"t_gen_us", log.t_gen_us},
                  {"random_bytes", log.random_bytes}, {"bytes_rx", log.bytes_rx},
                  {"bytes_tx", log.bytes_tx}, {"key_ok", log.key_ok}};
  const auto text = j.dump();
  return frame_message(MessageType::server_log, pqc::as_bytes(text));
}

ServerLog decode_server_log(ByteView body) {
  try {
    const auto j = json::parse(body.begin(), body.end());
    ServerLog log;
    log.t_eaas_ms = j.at("t_eaas_ms").get<double>();
    log.t_gen_us = j.at("t_gen_us").get<double>();
    log.random_bytes = j.at("random_bytes").get<std::uint64_t>();
    log.bytes_rx = j.at("bytes_rx").get<std::uint64_t>();
    log.bytes_tx = j.at("bytes_tx").get<std::uint64_t>();
    log.key_ok = j.at("key_ok").get<bool>();
    return log;
  } catch (const json::exception& e) {
    throw Error(Errc::malformed_frame, std::string("server log: ") + e.what());
  }
}

void flip_bit(Bytes& b, std::size_t index) {
  if (!b.empty()) b[index % b.size()] ^= 0x01;
}

}  // namespace

std::string to_json(const HandshakeRecord& r) {
  const json j = {{"kem", r.kem},
                  {"dsa", r.dsa},
                  {"mode", to_string(r.mode)},
                  {"t_handshake_ms", r.t_handshake_ms},
                  {"t_eaas_ms", r.t_eaas_ms},
                  {"t_gen_us", r.t_gen_us},
                  {"bytes_c2s", r.bytes_c2s},
                  {"bytes_s2c", r.bytes_s2c},
                  {"packets_c2s", r.packets_c2s},
                  {"packets_s2c", r.packets_s2c},
                  {"random_bytes_consumed", r.random_bytes_consumed},
                  {"success", r.success},
                  {"error", r.error},
                  {"flights", r.flights}};
  return j.dump();
}

HandshakeRecord record_from_json(std::string_view text) {
  try {
    const auto j = json::parse(text);
    HandshakeRecord r;
    r.kem = j.at("kem").get<std::string>();
    r.dsa = j.at("dsa").get<std::string>();
    r.mode = parse_mode(j.at("mode").get<std::string>());
    r.t_handshake_ms = j.at("t_handshake_ms").get<double>();
    r.t_eaas_ms = j.at("t_eaas_ms").get<double>();
    r.t_gen_us = j.at("t_gen_us").get<double>();
    r.bytes_c2s = j.at("bytes_c2s").get<std::uint64_t>();
    r.bytes_s2c = j.at("bytes_s2c").get<std::uint64_t>();
    r.packets_c2s = j.at("packets_c2s").get<std::uint64_t>();
    r.packets_s2c = j.at("packets_s2c").get<std::uint64_t>();
    r.random_bytes_consumed = j.at("random_bytes_consumed").get<std::uint64_t>();
    r.success = j.at("success").get<bool>();
    r.error = j.value("error", std::string{});
    r.flights = j.value("flights", std::vector<std::size_t>{});
    return r;
  } catch (const json::exception& e) {
    throw Error(Errc::invalid_argument, std::string("handshake record: ") + e.what());
  }
}

HandshakeShape shape_for(const pqc::Catalog& catalog, const std::string& kem, KeyExchangeMode mode,
                         const std::vector<pki::Certificate>& server_chain,
                         const std::vector<pki::Certificate>* client_chain) {
  if (server_chain.empty()) throw Error(Errc::invalid_argument, "empty server chain");
  HandshakeShape shape;
  shape.kem = &catalog.kem(kem);
  shape.dsa = &catalog.dsa(server_chain.front().dsa_profile);
  shape.mode = mode;
  for (const auto& c : server_chain) shape.server_chain.push_back(c.encode().size());
  if (client_chain != nullptr && !client_chain->empty()) {
    shape.client_dsa = &catalog.dsa(client_chain->front().dsa_profile);
    for (const auto& c : *client_chain) shape.client_chain.push_back(c.encode().size());
  }
  return shape;
}

// ---------------------------------------------------------------- server

struct TlsServer::Impl {
  pqc::Catalog catalog;
  TlsServerConfig config;
  const pqc::Scheme* kem = nullptr;
  const pqc::Scheme* dsa = nullptr;
  Bytes cert_msg;
  std::atomic<std::uint64_t> succeeded{0};
  std::atomic<std::uint64_t> failed{0};
  std::unique_ptr<net::TcpService> service;

  Impl(pqc::Catalog cat, TlsServerConfig cfg) : catalog(std::move(cat)), config(std::move(cfg)) {
    kem = &catalog.kem(config.kem);
    if (config.identity.chain.empty()) throw Error(Errc::startup, "server identity has no certificate");
    dsa = &catalog.dsa(config.identity.chain.front().dsa_profile);
    if (config.identity.sk.size() != dsa->sk_size() && config.identity.sk.size() != dsa->pk_size()) {
      throw Error(Errc::startup, "server key does not match its certificate algorithm");
    }
    cert_msg = certificate_message(config.identity.chain);
    if (config.faults.corrupt_certificate) {
      // Last byte of the leaf's signature: header, count, u24 length.
      const auto leaf_len = config.identity.chain.front().encode().size();
      flip_bit(cert_msg, kMessageHeader + 1 + 3 + leaf_len - 1);
    }
  }

  void serve_connection(net::Socket& socket) {
    protocol::EaasClient eaas(config.eaas, config.eaas_timeout_ms);
    protocol::EaasEntropySource entropy(eaas, config.eaas_timeout_ms);
    Wire wire(socket, config.io_timeout_ms);
    bool ok = false;
    try {
      ok = run(wire, entropy);
    } catch (const Error& e) {
      wire.alert(std::string(to_string(e.code())) + ": " + e.what());
    } catch (const std::exception& e) {
      wire.alert(e.what());
    }
    (ok ? succeeded : failed).fetch_add(1);
  }

  bool run(Wire& wire, protocol::EaasEntropySource& entropy) {
    Transcript tr;
    const auto ch_msg = wire.expect(MessageType::client_hello);
    tr.append(wire_bytes(ch_msg));
    const auto ch = decode_client_hello(ch_msg.body);
    if (ch.kem != kem->name()) {
      throw Error(Errc::invalid_argument, "server offers " + kem->name() + ", client asked for " + ch.kem);
    }
    if (ch.mutual && !config.client_root) {
      throw Error(Errc::invalid_argument, "mutual authentication not configured");
    }

    pqc::KemKeyPair kp;
    Bytes ss;
    Bytes share;
    if (ch.mode == KeyExchangeMode::client_encapsulates) {
      if (!ch.share.empty()) throw Error(Errc::malformed_frame, "unexpected key share in ClientHello");
      kp = pqc::kem_keygen(*kem, entropy);
      share = kp.pk;
    } else {
      if (ch.share.size() != kem->pk_size()) throw Error(Errc::malformed_frame, "bad key share size");
      auto enc = pqc::kem_encapsulate(*kem, ch.share, entropy);
      share = std::move(enc.ct);
      ss = std::move(enc.ss);
    }

    const auto sh = frame_message(MessageType::server_hello, concat({hello_random(), share}));
    tr.append(sh);
    tr.append(cert_msg);
    auto sig = pqc::dsa_sign(*dsa, config.identity.sk,
                             concat({pqc::as_bytes(kServerVerifyLabel), tr.hash()}), entropy);
    if (config.faults.corrupt_cert_verify) flip_bit(sig, 0);
    const auto cv = frame_message(MessageType::certificate_verify, sig);
    tr.append(cv);
    wire.send({&sh, &cert_msg, &cv});

    if (ch.mode == KeyExchangeMode::client_encapsulates) {
      const auto kx = wire.expect(MessageType::key_exchange);
      tr.append(wire_bytes(kx));
      if (kx.body.size() != kem->ct_or_sig_size()) throw Error(Errc::malformed_frame, "bad ciphertext size");
      ss = pqc::kem_decapsulate(*kem, kp.sk, kx.body);
    }
    if (ch.mutual) {
      const auto ccert = wire.expect(MessageType::certificate);
      tr.append(wire_bytes(ccert));
      const auto leaf = verify_presented_chain(catalog, ccert.body, *config.client_root);
      const auto th = tr.hash();
      const auto ccv = wire.expect(MessageType::certificate_verify);
      if (!verify_cert_verify(catalog, leaf, kClientVerifyLabel, th, ccv.body)) {
        throw Error(Errc::chain_invalid, "client CertificateVerify does not verify");
      }
      tr.append(wire_bytes(ccv));
    }

    const auto key = session_key(ss, tr.hash());
    const auto cf = wire.expect(MessageType::finished);
    if (cf.body != finished_mac("finished-client", key, tr.hash())) {
      throw Error(Errc::chain_invalid, "client Finished mismatch");
    }
    tr.append(wire_bytes(cf));
    auto sf_mac = finished_mac("finished-server", key, tr.hash());
    if (config.faults.corrupt_finished) flip_bit(sf_mac, 0);
    const auto sf = frame_message(MessageType::finished, sf_mac);
    wire.send({&sf});

    ServerLog log;
    log.bytes_rx = wire.received();
    log.bytes_tx = wire.sent();
    const auto canary = wire.expect(MessageType::canary);
    log.key_ok = canary.body == canary_for(key);
    log.t_eaas_ms = entropy.total_t_eaas_ms();
    log.t_gen_us = entropy.total_t_gen_us();
    log.random_bytes = entropy.bytes_drawn();
    const auto log_msg = encode_server_log(log);
    wire.send({&log_msg});
    return log.key_ok;
  }
};

TlsServer::TlsServer(pqc::Catalog catalog, TlsServerConfig config)
    : impl_(std::make_unique<Impl>(std::move(catalog), std::move(config))) {
  impl_->service = std::make_unique<net::TcpService>(
      impl_->config.listen, [impl = impl_.get()](net::Socket& s, std::uint64_t) { impl->serve_connection(s); });
}

TlsServer::~TlsServer() { stop(); }

const net::Endpoint& TlsServer::endpoint() const noexcept { return impl_->service->endpoint(); }

TlsServerStats TlsServer::stats() const { return {impl_->succeeded.load(), impl_->failed.load()}; }

void TlsServer::stop() {
  if (impl_ && impl_->service) impl_->service->stop();
}

// ---------------------------------------------------------------- client

HandshakeRecord run_handshake(const pqc::Catalog& catalog, const ClientConfig& config,
                              protocol::EaasClient& eaas, net::DelaySampler& sampler) {
  const auto& kem = catalog.kem(config.kem);
  const pqc::Scheme* client_dsa = nullptr;
  if (config.identity) {
    if (config.identity->chain.empty()) throw Error(Errc::invalid_argument, "client identity has no certificate");
    client_dsa = &catalog.dsa(config.identity->chain.front().dsa_profile);
  }
  const bool server_encaps = config.mode == KeyExchangeMode::server_encapsulates;

  HandshakeRecord rec;
  rec.kem = config.kem;
  rec.mode = config.mode;
  protocol::EaasEntropySource entropy(eaas, config.eaas_timeout_ms);
  std::optional<Clock::time_point> t0;
  ServerLog slog;
  std::optional<Wire> wire;

  try {
    net::Socket socket = net::connect_tcp(config.server);
    wire.emplace(socket, config.io_timeout_ms);
    Transcript tr;

    try {
      // Flight 1. In server_encapsulates mode the client's key share needs
      // entropy first, so the clock starts before that fetch.
      ClientHello ch{hello_random(), config.mode, config.identity.has_value(), kem.name(), {}};
      pqc::KemKeyPair kp;
      if (server_encaps) {
        t0 = Clock::now();
        kp = pqc::kem_keygen(kem, entropy);
        ch.share = kp.pk;
      }
      const auto ch_msg = frame_message(MessageType::client_hello, encode_client_hello(ch));
      tr.append(ch_msg);
      if (!t0) t0 = Clock::now();
      net::apply_delay(sampler, [&] { wire->send({&ch_msg}); });
      rec.flights.push_back(ch_msg.size());

      // Flight 2.
      const auto sh = wire->expect(MessageType::server_hello);
      const auto cert = wire->expect(MessageType::certificate);
      const auto cv = wire->expect(MessageType::certificate_verify);
      net::sleep_for_delay(sampler.next());
      rec.flights.push_back(sh.wire_size() + cert.wire_size() + cv.wire_size());

      const std::size_t share_size = server_encaps ? kem.ct_or_sig_size() : kem.pk_size();
      if (sh.body.size() != kRandomSize + share_size) throw Error(Errc::malformed_frame, "bad ServerHello size");
      const ByteView share(sh.body.data() + kRandomSize, share_size);
      tr.append(wire_bytes(sh));
      tr.append(wire_bytes(cert));
      const auto leaf = verify_presented_chain(catalog, cert.body, config.trusted_root);
      rec.dsa = leaf.dsa_profile;
      if (!verify_cert_verify(catalog, leaf, kServerVerifyLabel, tr.hash(), cv.body)) {
        throw Error(Errc::chain_invalid, "server CertificateVerify does not verify");
      }
      tr.append(wire_bytes(cv));

      // Flight 3.
      Bytes ss;
      std::optional<Bytes> kx;
      if (server_encaps) {
        ss = pqc::kem_decapsulate(kem, kp.sk, share);
      } else {
        auto enc = pqc::kem_encapsulate(kem, share, entropy);
        ss = std::move(enc.ss);
        kx = frame_message(MessageType::key_exchange, enc.ct);
        tr.append(*kx);
      }
      std::optional<Bytes> ccert;
      std::optional<Bytes> ccv;
      if (config.identity) {
        ccert = certificate_message(config.identity->chain);
        tr.append(*ccert);
        const auto sig = pqc::dsa_sign(*client_dsa, config.identity->sk,
                                       concat({pqc::as_bytes(kClientVerifyLabel), tr.hash()}), entropy);
        ccv = frame_message(MessageType::certificate_verify, sig);
        tr.append(*ccv);
      }
      const auto key = session_key(ss, tr.hash());
      const auto cf = frame_message(MessageType::finished, finished_mac("finished-client", key, tr.hash()));
      tr.append(cf);
      std::size_t f3 = cf.size();
      net::apply_delay(sampler, [&] {
        Bytes all;
        for (const auto* m : {kx ? &*kx : nullptr, ccert ? &*ccert : nullptr, ccv ? &*ccv : nullptr}) {
          if (m != nullptr) {
            all.insert(all.end(), m->begin(), m->end());
          }
        }
        all.insert(all.end(), cf.begin(), cf.end());
        f3 = all.size();
        wire->send({&all});
      });
      rec.flights.push_back(f3);

      // Flight 4.
      const auto sf = wire->expect(MessageType::finished);
      net::sleep_for_delay(sampler.next());
      const auto t1 = Clock::now();
      rec.flights.push_back(sf.wire_size());
      if (sf.body != finished_mac("finished-server", key, tr.hash())) {
        throw Error(Errc::chain_invalid, "server Finished mismatch");
      }
      rec.t_handshake_ms = elapsed_ms(*t0, t1);
      rec.bytes_c2s = wire->sent();
      rec.bytes_s2c = wire->received();

      // Post-handshake, outside the timer and without link delay.
      const auto canary = frame_message(MessageType::canary, canary_for(key));
      wire->send({&canary});
      slog = decode_server_log(wire->expect(MessageType::server_log).body);
      rec.success = slog.key_ok;
      if (!slog.key_ok) rec.error = "server derived a different session key";
    } catch (const Error& e) {
      wire->alert(std::string(to_string(e.code())) + ": " + e.what());
      throw;
    }
  } catch (const std::exception& e) {
    rec.success = false;
    rec.error = e.what();
    if (t0 && rec.t_handshake_ms == 0.0) rec.t_handshake_ms = elapsed_ms(*t0, Clock::now());
    if (wire && rec.bytes_c2s == 0) {
      rec.bytes_c2s = wire->sent();
      rec.bytes_s2c = wire->received();
    }
  }

  const auto segments = count_segments(rec.flights, config.net.mtu_payload);
  rec.packets_c2s = segments.c2s;
  rec.packets_s2c = segments.s2c;
  rec.t_eaas_ms = entropy.total_t_eaas_ms() + slog.t_eaas_ms;
  rec.t_gen_us = entropy.total_t_gen_us() + slog.t_gen_us;
  rec.random_bytes_consumed = entropy.bytes_drawn() + slog.random_bytes;
  return rec;
}

}  // namespace eaas::tls
