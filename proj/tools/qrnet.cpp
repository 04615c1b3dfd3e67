#include <iostream>

#include "qrnet/cli.hpp"

int main(int argc, char** argv) { return qrnet::cli::run(argc, argv, std::cout, std::cerr); }
