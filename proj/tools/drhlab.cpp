#include <iostream>

#include "drh/cli.hpp"

int main(int argc, char** argv) { return drh::cli::run(argc, argv, std::cout, std::cerr); }
