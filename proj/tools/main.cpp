#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
    return twdp::cli::cli_main(argc, argv, std::cout, std::cerr);
}
