#include <iostream>

#include "nsdiag/cli.hpp"

int main(int argc, char** argv) { return nsdiag::run_cli(argc, argv, std::cout, std::cerr); }
