#include <iostream>

#include "qsample/cli.hpp"

int main(int argc, char** argv) { return qsample::run_cli(argc, argv, std::cout, std::cerr); }
