#include "gapidx/cli.hpp"

int main(int argc, char** argv) { return gapidx::cli_main(argc, argv); }
