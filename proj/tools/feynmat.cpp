#include <iostream>

#include "feynmat/cli.hpp"

int main(int argc, char** argv) {
    return feynmat::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
