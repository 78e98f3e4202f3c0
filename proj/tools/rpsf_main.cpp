#include "rpsf/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return rpsf::run_cli(argc, argv, std::cout, std::cerr); }
