#include <iostream>

#include "fibising/commands.hpp"

int main(int argc, char** argv) { return fibising::run_cli(argc, argv, std::cout, std::cerr); }
