#include <iostream>

#include "jacalg/cli.h"

int main(int argc, char** argv) { return jacalg::cli::run(argc, argv, std::cout, std::cerr); }
