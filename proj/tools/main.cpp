#include <iostream>

#include "iondeco/cli.hpp"

int main(int argc, char** argv) { return iondeco::cli::cli_main(argc, argv, std::cout, std::cerr); }
