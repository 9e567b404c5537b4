#include "keydisc/cli.hpp"

int main(int argc, char** argv) { return keydisc::cli::run(argc, argv); }
