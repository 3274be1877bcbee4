#include "hierband/cli.hpp"

int main(int argc, char** argv) { return hierband::run_cli(argc, argv); }
