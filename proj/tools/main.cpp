#include "fusionrig/cli.hpp"

int main(int argc, char** argv) { return fusionrig::cli::run(argc, argv); }
