#include <fstream>
#include <iostream>
#include <stdexcept>

#include "commands.hpp"
#include "modprime/errors.hpp"
#include "modprime/parallel.hpp"

int main(int argc, char** argv) {
  using namespace modprime;
  const std::vector<std::string> args(argv + 1, argv + argc);
  const auto parsed = cli::parse_run_config(args);
  switch (parsed.status) {
    case cli::ParseOutcome::Status::help:
      std::cout << parsed.message;
      return 0;
    case cli::ParseOutcome::Status::usage_error:
      std::cerr << parsed.message;
      return 2;
    case cli::ParseOutcome::Status::ok:
      break;
  }
  const cli::RunConfig& cfg = parsed.config;
  try {
    set_max_threads(cfg.threads);
    ConvergenceTable table = cli::run_command(cfg);
    table.command = cfg.command;
    table.params = cli::canonical_params(cfg);

    std::ofstream file;
    if (!cfg.output.empty()) {
      file.open(cfg.output, std::ios::binary | std::ios::trunc);
      if (!file) throw ResourceError("cannot open output file " + cfg.output);
    }
    std::ostream& out = cfg.output.empty() ? std::cout : file;
    if (cfg.format == "json") {
      table.write_json(out);
    } else {
      table.write_csv(out);
    }
    out.flush();
    if (!out) throw ResourceError("failed writing output");
    table.write_summary(std::cerr);
    return 0;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
  } catch (const ContractError& e) {
    std::cerr << "contract violated: " << e.what() << '\n';
  } catch (const RangeError& e) {
    std::cerr << "outside validated range: " << e.what() << '\n';
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
  } catch (const NearSingularError& e) {
    std::cerr << "near a zero of J_0: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 3;
}
