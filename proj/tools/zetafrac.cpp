#include <iostream>
#include <string>
#include <vector>

#include "zetafrac/cli.hpp"

int main(int argc, char** argv)
{
    std::ios::sync_with_stdio(false);
    const std::vector<std::string> args(argv, argv + argc);
    const int rc = zetafrac::cli::dispatch(args, std::cout, std::cerr);
    std::cout.flush();
    return rc;
}
