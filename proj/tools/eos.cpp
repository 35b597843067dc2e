#include "eos/cli.hpp"

int main(int argc, char** argv) { return eos::cli::run(argc, argv); }
