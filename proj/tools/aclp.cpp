#include "aclp/cli.hpp"

int main(int argc, char** argv) { return aclp::run_cli(argc, argv); }
