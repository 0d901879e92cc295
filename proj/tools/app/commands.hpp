#pragma once

namespace coulomb::app {

/// Exit codes: 0 ok, 1 invalid config, 2 numerical failure, 3 acceptance failures.
int run_cli(int argc, char** argv);

}  // namespace coulomb::app
