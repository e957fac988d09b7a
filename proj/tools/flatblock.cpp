#include <iostream>

#include "flatblock/cli.h"

int main(int argc, char** argv) { return flatblock::cli::run(argc, argv, std::cout, std::cerr); }
