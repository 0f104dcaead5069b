#include <iostream>

#include "torus_hypo/cli.hpp"

int main(int argc, char** argv) { return torus_hypo::cli::run_cli(argc, argv, std::cout, std::cerr); }
