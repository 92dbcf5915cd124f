#include <iostream>

#include "destfinder/cli.hpp"

int main(int argc, char** argv) { return destfinder::run_cli(argc, argv, std::cout, std::cerr); }
