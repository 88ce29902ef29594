// qdrg: build a Q-polynomial DRG, check the algebra identities, print a scoreboard.
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "qdrg/report.hpp"

namespace {

std::string default_json_path(const qdrg::RunConfig& cfg, const std::string& command) {
  const char* dir = std::getenv("QDRG_OUTPUT_DIR");
  if (dir == nullptr || *dir == '\0') return {};
  std::string stem = command + "_" + cfg.spec + "_v" + cfg.vertex;
  for (char& c : stem) {
    if (c == ':' || c == ',' || c == '/') c = '_';
  }
  return (std::filesystem::path(dir) / (stem + ".json")).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Terwilliger algebras of Q-polynomial distance-regular graphs"};
  app.require_subcommand(1);

  qdrg::RunConfig cfg;
  std::vector<std::string> tols;
  std::string ordering, cell = "first";
  std::vector<std::string> groups;
  bool quiet = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("spec", cfg.spec, "hamming:D,N | johnson:N,D | grassmann:q,N,D | cycle:n")->required();
    sub->add_option("--vertex", cfg.vertex, "base vertex: index, label or 'all'");
    sub->add_option("--seed", cfg.seed, "seed for the module decomposition");
    sub->add_option("--domain", cfg.domain, "exact | float | auto");
    sub->add_option("--tol", tols, "tolerance override key=value (rank, cluster, residual)");
    sub->add_option("--json", cfg.output, "write the JSON report here");
    sub->add_option("--ordering", ordering, "Q-polynomial ordering of E_0..E_D, e.g. 0,1,2,3");
    sub->add_flag("--quiet", quiet, "scoreboard only on failure");
  };
  auto* verify = app.add_subcommand("verify", "full pipeline and check scoreboard");
  common(verify);
  verify->add_option("--checks", groups, "restrict to groups: bm dual talg tmod scheme");
  auto* bm = app.add_subcommand("bm", "Bose-Mesner algebra, eigenvalues, Krein parameters");
  common(bm);
  auto* tmod = app.add_subcommand("tmod", "irreducible T-module decomposition");
  common(tmod);
  auto* scheme = app.add_subcommand("scheme", "subconstituent scheme detection");
  common(scheme);
  scheme->add_option("--cell", cell, "first | last")->check(CLI::IsMember({"first", "last"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::string command = "verify";
  try {
    if (bm->parsed()) {
      command = "bm";
      cfg.checks = {"bm"};
    } else if (tmod->parsed()) {
      command = "tmod";
      cfg.checks = {"tmod"};
    } else if (scheme->parsed()) {
      command = "scheme";
      cfg.checks = {"scheme"};
      cfg.cells = {cell};
    } else if (!groups.empty()) {
      cfg.checks = std::set<std::string>(groups.begin(), groups.end());
    }
    for (const auto& t : tols) qdrg::apply_tolerance(cfg.tol, t);
    if (!ordering.empty()) cfg.ordering = qdrg::parse_ordering(ordering);
    if (cfg.output.empty()) cfg.output = default_json_path(cfg, command);

    const qdrg::Report report = qdrg::run(cfg);
    if (!quiet || !report.pass()) std::cout << qdrg::render_text(report);
    if (!cfg.output.empty()) qdrg::emit_json(report, cfg.output);
    return qdrg::exit_code(report);
  } catch (const qdrg::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const qdrg::GuardError& e) {
    std::cerr << "guard tripped: " << e.what() << '\n';
    return 3;
  } catch (const qdrg::VerificationError& e) {
    std::cerr << "verification failed [" << e.anchor() << "]: " << e.what() << '\n';
    return 1;
  }
}
