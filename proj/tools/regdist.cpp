#include <iostream>

#include "regdist/cli.hpp"

int main(int argc, char** argv) { return regdist::cli::main_entry(argc, argv, std::cout, std::cerr); }
