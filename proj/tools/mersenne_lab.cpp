#include <mersenne_lab/cli.hpp>

int main(int argc, char** argv) { return mlab::cli::run_command(argc, argv); }
