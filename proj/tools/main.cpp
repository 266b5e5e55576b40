#include <iostream>
#include <string>
#include <vector>

#include "sarg04/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return sarg04::run_cli(args, std::cout, std::cerr);
}
