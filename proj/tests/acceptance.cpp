// One line per acceptance check; nonzero exit if any fails.
//   acceptance [--quick] [--only 1,5,7] [--json report.json]

#include <iostream>

#include "app/acceptance.hpp"

int main(int argc, char** argv) {
  using namespace coulomb::app;
  CLI::App app{"acceptance checks"};
  AcceptanceOptions opt;
  std::string json;
  app.add_flag("--quick", opt.quick, "cap n at 100");
  app.add_option("--only", opt.only, "check ids")->delimiter(',');
  app.add_option("--json", json, "write the results as JSON");
  CLI11_PARSE(app, argc, argv);
  opt.progress = &std::cout;
  const auto rs = run_acceptance(opt);
  if (!json.empty()) emit(json, dump(to_json(rs)), std::cout);
  const bool ok = all_passed(rs);
  std::cout << (ok ? "acceptance: all checks passed" : "acceptance: FAILED") << std::endl;
  return ok ? 0 : 1;
}
