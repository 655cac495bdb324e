#include <iostream>

#include "purcellsim/cli/commands.hpp"

int main(int argc, char** argv) {
    return purcellsim::cli::run_cli(argc, argv, std::cout, std::cerr);
}
