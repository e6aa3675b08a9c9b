#include <iostream>

#include "frlogic/cli/cli.hpp"

int main(int argc, char** argv) { return frlogic::cli::dispatch(argc, argv, std::cout, std::cerr); }
