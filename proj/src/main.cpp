#include <iostream>

#include "hwec/cli.hpp"

int main(int argc, char** argv) { return hwec::cli::run(argc, argv, std::cout, std::cerr); }
