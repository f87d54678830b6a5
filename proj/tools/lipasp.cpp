#include <iostream>

#include "lipasp/cli.hpp"

int main(int argc, char** argv) { return lipasp::cli::run(argc, argv, std::cout, std::cerr); }
