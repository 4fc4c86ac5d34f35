#include <iostream>

#include "varcurve/cli.hpp"

int main(int argc, char** argv) { return varcurve::cli::run(argc, argv, std::cout, std::cerr); }
