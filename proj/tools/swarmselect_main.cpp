#include "swarmselect/cli.hpp"

int main(int argc, char** argv) { return swarmselect::execute(argc, argv); }
