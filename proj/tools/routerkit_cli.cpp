#include <iostream>

#include "routerkit/scanio/cli.hpp"

int main(int argc, char** argv)
{
    return routerkit::scanio::run_cli(argc, argv, std::cout, std::cerr);
}
