#include <iostream>

#include "cli/cli.hpp"

int main(int argc, char** argv) { return sl3::cli::run(argc, argv, std::cout, std::cerr); }
