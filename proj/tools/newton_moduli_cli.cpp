#include <iostream>

#include "newton_moduli/cli.hpp"

int main(int argc, char** argv)
{
    return newton_moduli::cli::run_cli(argc, argv, std::cout, std::cerr);
}
