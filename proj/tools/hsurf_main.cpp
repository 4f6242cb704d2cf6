#include <iostream>

#include "hsurf/commands.hpp"

int main(int argc, char** argv) { return hsurf::run_cli(argc, argv, std::cout, std::cerr); }
