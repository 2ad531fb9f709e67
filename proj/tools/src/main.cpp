#include <iostream>

#include "ontoqubit_cli/run.hpp"

int main(int argc, char** argv) { return ontoqubit::cli::run(argc, argv, std::cout, std::cerr); }
