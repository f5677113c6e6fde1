#include <iostream>
#include <string>
#include <vector>

#include <dsiht/tools/commands.hpp>

int main(int argc, char** argv)
{
    const std::vector<std::string> args(argv, argv + argc);
    return dsiht::cli::run(args, std::cout, std::cerr);
}
