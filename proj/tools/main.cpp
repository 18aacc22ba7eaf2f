#include "cli.hpp"

int main(int argc, char** argv) { return hotv::cli::run(argc, argv); }
