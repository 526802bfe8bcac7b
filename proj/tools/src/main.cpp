#include <iostream>

#include "emac/cli.hpp"

int main(int argc, char** argv) { return emac::cli::run_cli(argc, argv, std::cout, std::cerr); }
