#include "cft3m/cli.hpp"

int main(int argc, char** argv) { return cft3m::cli_main(argc, argv); }
