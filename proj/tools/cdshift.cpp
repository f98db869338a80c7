#include <iostream>

#include "cdshift/cli/commands.hpp"

int main(int argc, char** argv) { return cdshift::cli::run(argc, argv, std::cout, std::cerr); }
