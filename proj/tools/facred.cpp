#include <string>
#include <vector>
#include <iostream>

#include "facred/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return facred::run_cli(args, std::cout, std::cerr);
}
