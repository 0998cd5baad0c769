#include <iostream>

#include "detreact/cli.hpp"

int main(int argc, char** argv) { return detreact::cli::run(argc, argv, std::cout, std::cerr); }
