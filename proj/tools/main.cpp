#include "kauction/cli.hpp"

int main(int argc, char** argv) { return kauction::run_cli(argc, argv); }
