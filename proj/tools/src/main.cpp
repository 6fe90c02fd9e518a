#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return expo_surf::cli::run(argc, argv, std::cout, std::cerr); }
