#include <iostream>

#include "macroeco/cli/app.hpp"

int main(int argc, char** argv) { return macroeco::cli::run_cli(argc, argv, std::cout, std::cerr); }
