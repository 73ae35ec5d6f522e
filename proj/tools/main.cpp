#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) { return regretdro::cli::run(argc, argv, std::cout, std::cerr); }
