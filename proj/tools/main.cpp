#include "adiabloch/cli.hpp"

int main(int argc, char** argv) { return adiabloch::cli_main(argc, argv); }
