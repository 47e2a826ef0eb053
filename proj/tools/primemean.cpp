#include <iostream>

#include "primemean/cli.hpp"

int main(int argc, char** argv) { return pmean::cli::run(argc, argv, std::cout, std::cerr); }
