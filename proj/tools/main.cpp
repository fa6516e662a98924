#include <iostream>

#include "rumor/harness/cli.hpp"

int main(int argc, char** argv) { return rumor::harness::cli(argc, argv, std::cout, std::cerr); }
