#include <iostream>
#include <string>
#include <vector>

#include "qfclass/cli.hpp"

int main(int argc, char ** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return qfc::run(args, std::cout, std::cerr);
}
