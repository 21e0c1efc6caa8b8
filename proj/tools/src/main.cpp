#include <iostream>

#include "adrc_cli/commands.hpp"

int main(int argc, char** argv) { return adrc::cli::run_cli(argc, argv, std::cout, std::cerr); }
