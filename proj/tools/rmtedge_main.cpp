#include <iostream>
#include <string>
#include <vector>

#include "rmtedge/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return rmtedge::cli_run(args, std::cout, std::cerr);
}
