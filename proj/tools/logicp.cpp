#include <logicp/cli.hpp>

int main(int argc, char** argv) { return logicp::cli::run(argc, argv); }
