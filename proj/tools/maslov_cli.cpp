#include "maslov/cli.hpp"

int main(int argc, char** argv) { return maslov::cli::run(argc, argv); }
