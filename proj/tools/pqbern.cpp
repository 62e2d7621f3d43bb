#include <iostream>

#include "pqbernstein/cli.hpp"

int main(int argc, char** argv) { return pqb::cli::run(argc, argv, std::cout, std::cerr); }
