#include "gridmarket/cli.hpp"

int main(int argc, char** argv) { return gridmarket::run_cli(argc, argv); }
