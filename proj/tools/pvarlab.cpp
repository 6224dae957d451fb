#include "pvarlab/cli.hpp"

int main(int argc, char** argv) { return pvarlab::cli_main(argc, argv); }
