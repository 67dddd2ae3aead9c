#include <iostream>

#include "iselab/cli.hpp"

int main(int argc, char** argv)
{
    return iselab::run_cli(argc, argv, std::cout, std::cerr);
}
