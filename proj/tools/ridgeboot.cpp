#include "ridgeboot/cli.hpp"

int main(int argc, char** argv) { return ridgeboot::parse_and_dispatch(argc, argv); }
