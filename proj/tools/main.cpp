#include "sectoriga/cli.hpp"

int main(int argc, char** argv) { return siga::cli_main(argc, argv); }
