#pragma once

namespace siga {

/// Command-line entry point. Exit codes: 0 ok, 2 config error, 3 solver error, 4 rate-target miss.
int cli_main(int argc, char** argv);

}  // namespace siga
