#include "hcme/cli.hpp"

int main(int argc, char** argv) { return hcme::run_cli(argc, argv); }
