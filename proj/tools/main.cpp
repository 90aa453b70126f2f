#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return platoon::cli::run(argc, argv, std::cout, std::cerr); }
