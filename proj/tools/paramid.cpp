#include "paramid/cli.hpp"

int main(int argc, char** argv) { return paramid::cli::run_cli(argc, argv); }
