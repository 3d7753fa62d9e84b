#include <iostream>

#include "afspec/cli.hpp"

int main(int argc, char** argv) { return afspec::cli::run(argc, argv, std::cout, std::cerr); }
