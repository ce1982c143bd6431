#include <iostream>

#include "siegel/cli.hpp"

int main(int argc, char** argv) {
    return siegel::run_cli(argc, argv, std::cout, std::cerr);
}
