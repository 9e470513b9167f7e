#include "thriftidx/cli.hpp"

int main(int argc, char** argv) { return thriftidx::cli::run(argc, argv); }
