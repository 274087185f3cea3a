#include "diffalg/cli.hpp"

int main(int argc, char** argv) { return diffalg::cli_main(argc, argv); }
