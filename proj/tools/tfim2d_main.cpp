#include "tfim2d/cli.hpp"

int main(int argc, char** argv) { return tfim2d::run_cli(argc, argv); }
