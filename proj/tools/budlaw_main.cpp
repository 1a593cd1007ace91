#include <iostream>

#include "budlaw/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return budlaw::cli::run(args, std::cout, std::cerr);
}
