#include <iostream>

#include "flw/cli.hpp"

int main(int argc, char** argv) { return flw::run_cli(argc, argv, std::cout, std::cerr); }
