#include "matchbench/cli.hpp"

int main(int argc, char** argv) {
    return matchbench::run_cli(argc, argv);
}
