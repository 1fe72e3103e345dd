#include <iostream>

#include "vibropol_cli/cli.hpp"

int main(int argc, char** argv) { return vibropol::cli::run(argc, argv, std::cout, std::cerr); }
