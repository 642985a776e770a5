#include "cli/commands.hpp"

int main(int argc, char** argv) { return rydchip::cli::run(argc, argv); }
