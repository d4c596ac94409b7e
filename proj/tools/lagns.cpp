#include "lagns/cli.hpp"

int main(int argc, char** argv) { return lagns::cli_main(argc, argv); }
