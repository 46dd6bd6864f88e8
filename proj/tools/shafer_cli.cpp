#include "cli_app.hpp"

int main(int argc, char **argv) { return shafer::cli::run(argc, argv); }
