#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return caarl::cli::run_subcommand(args, std::cout, std::cerr);
}
