#include <iostream>

#include "kinex/cli.hpp"

int main(int argc, char** argv) { return kinex::cli::run(argc, argv, std::cout, std::cerr); }
