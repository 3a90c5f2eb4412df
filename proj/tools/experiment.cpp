// Orchestrates the two use cases end to end and writes reports.
#include <CLI11.hpp>

#include <cstdio>

#include "eaas/experiment/config.hpp"
#include "eaas/experiment/report.hpp"
#include "eaas/experiment/runner.hpp"
#include "tool_support.hpp"

int main(int argc, char** argv) {
  CLI::App app{"EaaS + PQC handshake experiments"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a use case and emit its report");
  std::string config_path;
  int usecase = 1;
  std::string format = "csv";
  std::string output_dir;
  int repetitions = 0;
  run->add_option("--config", config_path, "experiment config JSON (defaults when omitted)");
  run->add_option("--usecase", usecase, "1 = local PKI, 2 = emulated remote server")->check(CLI::IsMember({1, 2}));
  run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--output-dir", output_dir, "override the config's output_dir");
  run->add_option("--repetitions", repetitions, "override the config's repetitions");

  auto* bw = app.add_subcommand("bandwidth", "predicted handshake bytes for a KEM x DSA grid");
  std::vector<std::string> kems{"p384_kyber768", "p384_bikel3", "p384_hqc192", "p384_frodo976aes",
                                "p384_frodo976shake"};
  std::vector<std::string> dsas{"rsa3072", "p256", "p384_dilithium3", "p384_sphincssha2192fsimple"};
  std::string mode = "client_encapsulates";
  std::string catalog_path = eaas::pqc::default_catalog_path().string();
  bw->add_option("--kems", kems, "KEM profiles")->delimiter(',');
  bw->add_option("--dsas", dsas, "DSA profiles")->delimiter(',');
  bw->add_option("--mode", mode, "client_encapsulates or server_encapsulates");
  bw->add_option("--catalog", catalog_path, "algorithm catalog JSON");

  CLI11_PARSE(app, argc, argv);

  return tools::guarded([&] {
    if (*bw) {
      const auto catalog = eaas::pqc::Catalog::load(catalog_path);
      const auto rows = eaas::experiment::bandwidth_grid(catalog, kems, dsas, eaas::tls::parse_mode(mode));
      std::fputs(eaas::experiment::render_bandwidth_csv(rows).c_str(), stdout);
      return 0;
    }
    auto config = config_path.empty() ? eaas::experiment::ExperimentConfig{}
                                      : eaas::experiment::load_config(config_path);
    if (!output_dir.empty()) config.output_dir = output_dir;
    if (repetitions != 0) config.repetitions = repetitions;
    const auto result = usecase == 1 ? eaas::experiment::run_usecase1(config)
                                     : eaas::experiment::run_usecase2(config);
    const auto paths = eaas::experiment::emit_report(result.rows, eaas::experiment::parse_format(format),
                                                     config.output_dir, "usecase" + std::to_string(usecase));
    for (const auto& r : result.rows) {
      std::fprintf(stderr, "%-20s %-7s ok %u/%u  t_hs %.2f ms  ratio %.4f +- %.4f%s\n", r.kem.c_str(),
                   std::string(eaas::experiment::to_string(r.scenario)).c_str(), r.successes, r.repetitions,
                   r.t_handshake_ms.mean, r.eaas_overhead_ratio.mean, r.eaas_overhead_ratio.sem,
                   r.fail_closed ? "  [fail-closed]" : "");
    }
    std::printf("%s\n%s\n%s\n", paths.report.c_str(), paths.fig3.c_str(), paths.fig4.c_str());
    return result.all_succeeded() ? 0 : 1;
  });
}
