#include "gfe/cli.hpp"

int main(int argc, char** argv) { return gfe::cli::main(argc, argv); }
