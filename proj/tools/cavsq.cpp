#include "cavsq/cli/app.hpp"

int main(int argc, char** argv) { return cavsq::cli::main(argc, argv); }
