#include "cli.hpp"

int main(int argc, char** argv) { return idt::cli::dispatch(argc, argv); }
