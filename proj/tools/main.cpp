#include <iostream>

#include "plf/cli.hpp"

int main(int argc, char** argv) {
    return plf::cli::run(argc, argv, {std::cin, std::cout, std::cerr});
}
