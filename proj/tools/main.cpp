#include <iostream>

#include "gaussfit/cli.hpp"

int main(int argc, char** argv) {
    return gaussfit::cli::run(argc, argv, std::cout, std::cerr);
}
