#include "dicke/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return dicke::cli::main(argc, argv, std::cout, std::cerr);
}
