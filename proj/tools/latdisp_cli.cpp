#include "latdisp/cli.hpp"

int main(int argc, char** argv) { return latdisp::cli::main(argc, argv); }
