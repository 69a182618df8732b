#include <iostream>

#include "rpp_cli/cli.hpp"

int main(int argc, char** argv) { return rpp::cli::run(argc, argv, std::cout, std::cerr); }
