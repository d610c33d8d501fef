#include "wb/cli.hpp"

int main(int argc, char** argv) { return wb::run_cli(argc, argv); }
