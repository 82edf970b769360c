#include "emscat/cli.hpp"

int main(int argc, char** argv) { return emscat::cli::run(argc, argv); }
