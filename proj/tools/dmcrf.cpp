#include "dmcrf/cli.hpp"

int main(int argc, char** argv) {
    return dmcrf::cli::run(argc, argv);
}
