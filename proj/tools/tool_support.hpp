#pragma once

#include <csignal>
#include <cstdio>
#include <exception>
#include <functional>

#include "eaas/error.hpp"

namespace tools {

// Blocks SIGINT/SIGTERM in every thread started afterwards; call first.
inline void block_shutdown_signals() {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
}

inline void wait_for_shutdown_signal() {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  int sig = 0;
  sigwait(&set, &sig);
}

// Runs body and maps library errors to exit code 1, usage errors to 2.
inline int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const eaas::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.code() == eaas::Errc::invalid_argument ? 2 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace tools
