#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "deepr/conformance.hpp"
#include "deepr/session.hpp"

int main(int argc, char** argv) {
  CLI::App app{"deepr - an interpreter for a subset of the R language"};
  app.require_subcommand(0, 1);

  std::string script_path;
  CLI::App* run = app.add_subcommand("run", "execute an R script file");
  run->add_option("file", script_path, "script to execute")->required();

  std::string corpus_dir;
  std::string filter;
  bool json = false;
  bool verbose = false;
  CLI::App* check =
      app.add_subcommand("check", "run the golden-file conformance corpus");
  check->add_option("corpus", corpus_dir, "directory with .Rt corpus files")
      ->required();
  check->add_option("--filter", filter, "only files whose name contains this");
  check->add_flag("--json", json, "emit a JSON report");
  check->add_flag("-v,--verbose", verbose, "list passing chunks too");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (run->parsed())
    return deepr::run_script(script_path, std::cout, std::cerr);

  if (check->parsed()) {
    try {
      deepr::ConformanceReport rep =
          deepr::run_conformance_dir(corpus_dir, filter);
      if (json)
        std::cout << deepr::report_to_json(rep) << "\n";
      else
        std::cout << deepr::report_to_text(rep, verbose);
      return rep.ok() ? 0 : 1;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }

  deepr::repl_loop(std::cin, std::cout, true);
  return 0;
}
