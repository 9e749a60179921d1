#include "commands.hpp"

int main(int argc, char** argv) { return landau::app::cli_main(argc, argv); }
