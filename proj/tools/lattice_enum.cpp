#include "lattenum/cli.hpp"

int main(int argc, char** argv) { return lattenum::cli::main(argc, argv); }
