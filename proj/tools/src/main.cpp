#include "concmeas_cli/commands.hpp"

int main(int argc, char** argv) { return concmeas::cli::run_cli(argc, argv); }
