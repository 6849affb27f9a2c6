#include <iostream>

#include "gammadep/cli/commands.hpp"

int main(int argc, char** argv) { return gammadep::cli::run(argc, argv, std::cout, std::cerr); }
