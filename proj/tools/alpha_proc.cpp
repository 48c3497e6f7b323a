#include <iostream>

#include "alpha_procrustes/cli.hpp"

int main(int argc, char** argv) { return alpha_procrustes::cli::run_cli(argc, argv, std::cout, std::cerr); }
