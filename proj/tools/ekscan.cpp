#include "ekscan/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return ekscan::dispatch(argc, argv, std::cout, std::cerr); }
