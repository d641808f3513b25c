#include "lowzero/cli.hpp"

int main(int argc, char** argv) { return lowzero::cli::main_entry(argc, argv); }
