#include <iostream>

#include "uniformis/cli.hpp"

int main(int argc, char** argv) { return uniformis::cli::dispatch(argc, argv, std::cout, std::cerr); }
