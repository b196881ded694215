#include <iostream>

#include "twdet/cli.hpp"

int main(int argc, char** argv) { return twdet::cli::run(argc, argv, std::cout, std::cerr); }
