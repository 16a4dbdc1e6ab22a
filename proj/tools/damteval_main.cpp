#include <iostream>
#include <string>
#include <vector>

#include "damteval/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return damteval::run_cli(args, std::cout, std::cerr);
}
