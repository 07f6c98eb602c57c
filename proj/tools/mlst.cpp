#include "mlst/cli.hpp"

int main(int argc, char** argv) { return mlst::run_cli(argc, argv); }
