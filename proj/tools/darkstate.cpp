#include <iostream>

#include "darkstate/cli/run.hpp"

int main(int argc, char** argv) {
    return darkstate::cli::main_entry(argc, argv, std::cout, std::cerr);
}
