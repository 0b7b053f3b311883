#include <iostream>

#include "qsvm/cli.hpp"

int main(int argc, char **argv) { return qsvm::cli::main_entry(argc, argv, std::cout, std::cerr); }
