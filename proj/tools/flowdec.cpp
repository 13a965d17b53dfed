#include <flowdec/cli.hpp>

int main(int argc, char** argv) { return flowdec::run_cli(argc, argv); }
