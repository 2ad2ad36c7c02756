#include "nam/cli/commands.hpp"

int main(int argc, char** argv) { return nam::cli::run(argc, argv); }
