#include "orbitsym/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return orbitsym::cli_main(argc, argv, std::cout, std::cerr); }
