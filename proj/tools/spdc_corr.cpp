#include <iostream>

#include "spdc/cli.hpp"

int main(int argc, char** argv) { return spdc::run_cli(argc, argv, std::cout, std::cerr); }
