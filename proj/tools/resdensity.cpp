#include <iostream>

#include "resdensity/cli.hpp"

int main(int argc, char** argv) { return resdensity::cli::run(argc, argv, std::cout, std::cerr); }
