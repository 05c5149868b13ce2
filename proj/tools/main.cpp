#include "heckeraise/cli.hpp"

int main(int argc, char** argv) { return heckeraise::run_cli(argc, argv); }
