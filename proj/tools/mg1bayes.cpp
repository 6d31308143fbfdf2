#include <iostream>

#include "mg1/cli.hpp"

int main(int argc, char** argv) { return mg1::run_cli(argc, argv, std::cout, std::cerr); }
