#include "dhw/cli.hpp"

int main(int argc, char** argv) { return dhw::cli::dispatch(argc, argv); }
