#include <iostream>

#include "specrev/cli.hpp"

int main(int argc, char** argv) { return specrev::cli::run(argc, argv, std::cout, std::cerr); }
