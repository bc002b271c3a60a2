#include <iostream>

#include "spheremax/cli.hpp"

int main(int argc, char** argv) { return spheremax::cli::run(argc, argv, std::cout, std::cerr); }
