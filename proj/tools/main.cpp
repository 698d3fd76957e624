#include "waveinv/cli.hpp"

int main(int argc, char** argv) {
    return waveinv::run_cli(argc, argv);
}
