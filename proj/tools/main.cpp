#include "coshom/cli.hpp"

int main(int argc, char** argv) { return coshom::run_cli(argc, argv); }
