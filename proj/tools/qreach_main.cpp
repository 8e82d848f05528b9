#include <iostream>

#include "qreach/cli.hpp"

int main(int argc, char** argv) { return qreach::cli::main_entry(argc, argv, std::cout, std::cerr); }
