#include "csa/cli.hpp"

int main(int argc, char** argv) { return csa::cli::cli_main(argc, argv); }
