#include <iostream>

#include "romvel/cli/commands.hpp"

int main(int argc, char** argv) { return romvel::cli::run_cli(argc, argv, std::cout, std::cerr); }
