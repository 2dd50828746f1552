#include "nlsgd/runner.hpp"

int main(int argc, char** argv) { return nlsgd::cli_main(argc, argv); }
