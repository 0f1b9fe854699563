#include "radint/cli.hpp"

int main(int argc, char** argv) { return radint::run_cli(argc, argv); }
