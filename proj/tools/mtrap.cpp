#include <iostream>

#include "mtrap/cli.hpp"

int main(int argc, char** argv) { return mtrap::cli::run(argc, argv, std::cout, std::cerr); }
