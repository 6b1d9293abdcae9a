#include "pdk/cli.hpp"

int main(int argc, char** argv) { return pdk::cli::run(argc, argv); }
