#include <iostream>

#include "isocrys/cli.hpp"

int main(int argc, char** argv) { return isocrys::cli::run_command(argc, argv, std::cout, std::cerr); }
