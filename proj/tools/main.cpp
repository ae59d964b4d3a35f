#include "rfde/driver.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return rfde::cli_main(argc, argv, std::cout, std::cerr);
}
