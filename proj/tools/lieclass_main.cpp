#include "lieclass/cli.hpp"

int main(int argc, char** argv) { return lieclass::run_cli(argc, argv); }
