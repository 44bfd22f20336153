#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return exo::cli::main(argc, argv, std::cout, std::cerr); }
