// sgwave: verify, run and study spectral Galerkin approximations of
// x_tt + A F(x) = g(x, A^{-1/2} x_t) on an interval.
//
// Exit codes: 0 pass, 1 condition or monitor failure, 2 divergence,
// 3 configuration or usage error.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sgwave/commands.hpp"
#include "sgwave/oracle.hpp"

namespace {

using namespace sgwave;

int run_oracle(const std::string& which, double lambda, double a0, double adot0, double t,
               double C0, double C1, double z0, double delta, double r, double w0) {
  nlohmann::json j;
  if (which == "linear") {
    const auto v = oracle::linear_exact(lambda, a0, adot0, t);
    j = {{"a", v.a}, {"adot", v.adot}};
  } else if (which == "gronwall") {
    const double grid[] = {t};
    j = {{"z", oracle::scalar_comparison(oracle::GronwallLinearOde{C0, C1, z0}, grid).front()}};
  } else if (which == "bernoulli") {
    const double grid[] = {t};
    j = {{"w", oracle::scalar_comparison(oracle::BernoulliOde{delta, r, w0}, grid).front()}};
  } else {
    std::cerr << "error: oracle kind must be linear, gronwall or bernoulli\n";
    return kExitConfigError;
  }
  std::cout << j.dump(2) << '\n';
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral Galerkin solver with energy and decay monitors"};
  app.require_subcommand(1);

  std::string config_path;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "JSON run configuration")->required();
  };

  CLI::App* verify = app.add_subcommand("verify", "Check the structural conditions by sampling");
  add_config(verify);
  CLI::App* run = app.add_subcommand("run", "Integrate, monitor, write CSV and JSON report");
  add_config(run);

  CLI::App* converge = app.add_subcommand("converge", "Errors against a reference over modes and dt");
  add_config(converge);
  ConvergeOptions conv;
  int m_ref = 0;
  double dt_ref = 0.0;
  std::string conv_csv;
  converge->add_option("--modes", conv.modes, "Ascending mode counts")->required()->expected(1, -1);
  converge->add_option("--dts", conv.dts, "Ascending time steps")->required()->expected(1, -1);
  converge->add_option("--m-ref", m_ref, "Reference mode count (default 2 max(modes))");
  converge->add_option("--dt-ref", dt_ref, "Reference time step (default min(dts)/10)");
  converge->add_option("--csv", conv_csv, "Also write the (modes, dt, error) table as CSV");

  CLI::App* decay = app.add_subcommand("decay", "Long run against the decay bound and its radius");
  add_config(decay);
  double decay_T = 50.0;
  decay->add_option("--T", decay_T, "Final time (default 50)");

  CLI::App* oracle_cmd = app.add_subcommand("oracle", "Reference values for debugging");
  oracle_cmd->group("");
  std::string oracle_kind;
  double lambda = 1.0, a0 = 0.0, adot0 = 0.0, t = 0.0, C0 = 0.0, C1 = 0.0, z0 = 0.0;
  double delta = 0.5, r = 2.0, w0 = 0.0;
  oracle_cmd->add_option("kind", oracle_kind, "linear | gronwall | bernoulli")->required();
  oracle_cmd->add_option("--lambda", lambda);
  oracle_cmd->add_option("--a0", a0);
  oracle_cmd->add_option("--adot0", adot0);
  oracle_cmd->add_option("--t", t);
  oracle_cmd->add_option("--C0", C0);
  oracle_cmd->add_option("--C1", C1);
  oracle_cmd->add_option("--z0", z0);
  oracle_cmd->add_option("--delta", delta);
  oracle_cmd->add_option("--r", r);
  oracle_cmd->add_option("--w0", w0);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  try {
    if (oracle_cmd->parsed())
      return run_oracle(oracle_kind, lambda, a0, adot0, t, C0, C1, z0, delta, r, w0);

    const RunConfig cfg = load_config(config_path);
    if (verify->parsed()) return cmd_verify(cfg, std::cout, std::cerr);
    if (run->parsed()) return cmd_run(cfg, std::cout, std::cerr);
    if (converge->parsed()) {
      if (converge->count("--m-ref")) conv.m_ref = m_ref;
      if (converge->count("--dt-ref")) conv.dt_ref = dt_ref;
      if (converge->count("--csv")) conv.csv_path = conv_csv;
      return cmd_converge(cfg, conv, std::cout, std::cerr);
    }
    if (decay->parsed())
      return cmd_decay(cfg, decay_T, std::cout, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitConfigError;
}
