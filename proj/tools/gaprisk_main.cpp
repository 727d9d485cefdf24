#include "gaprisk/scenario.hpp"

int main(int argc, char** argv) { return gaprisk::run_cli(argc, argv); }
