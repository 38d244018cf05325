#include "spinmarket/cli.hpp"

int main(int argc, char** argv) { return spinmarket::run_cli(argc, argv); }
