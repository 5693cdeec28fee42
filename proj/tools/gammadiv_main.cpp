#include <iostream>
#include <string>
#include <vector>

#include "gammadiv/cli_app.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return gammadiv::run(args, std::cout, std::cerr);
}
