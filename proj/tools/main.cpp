#include "kaczmarz/cli.hpp"

int main(int argc, char** argv) {
    return kaczmarz::run_cli(argc, argv);
}
