#include <iostream>

#include "fractalis/app/cli.hpp"

int main(int argc, char** argv) { return fractalis::app::run(argc, argv, std::cout, std::cerr); }
