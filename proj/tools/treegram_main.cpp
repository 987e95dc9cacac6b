#include "treegram/cli.hpp"

int main(int argc, char** argv) { return treegram::cli::run(argc, argv); }
