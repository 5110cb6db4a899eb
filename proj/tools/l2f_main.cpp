#include "l2f/cli.hpp"

int main(int argc, char** argv) { return l2f::cli_main(argc, argv); }
