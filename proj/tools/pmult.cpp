#include <iostream>

#include "pmult/cli.hpp"

int main(int argc, char** argv) { return pmult::run(argc, argv, std::cout, std::cerr); }
