#include "hortonlab/cli.hpp"

int main(int argc, char** argv) { return hortonlab::cli::run(argc, argv); }
