#include <iostream>

#include "cubecx/cli.hpp"

int main(int argc, char** argv) { return cubecx::cli::main_entry(argc, argv, std::cout, std::cerr); }
