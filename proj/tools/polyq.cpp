#include "polyq/cli.hpp"

int main(int argc, char** argv) { return polyq::cli_main(argc, argv); }
