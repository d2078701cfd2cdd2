#include <iostream>

#include "procrastimate/cli/app.hpp"

int main(int argc, char** argv) { return procrastimate::cli::run(argc, argv, std::cin, std::cout, std::cerr); }
