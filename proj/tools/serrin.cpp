#include "serrin/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return serrin::cli::run(argc, argv, std::cout, std::cerr); }
