#include "ets/cli.hpp"

int main(int argc, char** argv) { return ets::cli::run(argc, argv); }
