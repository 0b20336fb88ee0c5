#include "bimlog/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return bimlog::cli::run(argc, argv, std::cout, std::cerr);
}
