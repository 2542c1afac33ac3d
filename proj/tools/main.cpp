#include "hamtri/cli.hpp"

int main(int argc, char** argv) { return hamtri::cli::dispatch(argc, argv); }
