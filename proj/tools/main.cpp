#include "bellwalk/cli.hpp"

int main(int argc, char** argv) { return bellwalk::cli::run(argc, argv); }
