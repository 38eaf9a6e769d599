#include <iostream>
#include <string>
#include <vector>

#include "surdforge/cli.hpp"

int main(int argc, char** argv) {
    return surdforge::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
