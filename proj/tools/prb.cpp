#include "prb/cli.hpp"

int main(int argc, char** argv) { return prb::run_cli(argc, argv); }
