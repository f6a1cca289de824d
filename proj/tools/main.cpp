#include "vdm/cli.hpp"

int main(int argc, char** argv) { return vdm::run_cli(argc, argv); }
