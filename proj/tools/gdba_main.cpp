#include <iostream>

#include "gdba/cli.hpp"

int main(int argc, char **argv) { return gdba::cli::run(argc, argv, std::cout, std::cerr); }
