#include <iostream>

#include "semilag/cli/commands.hpp"

int main(int argc, char** argv) { return semilag::cli::run_cli(argc, argv, std::cout, std::cerr); }
