#include "cmod/cli.hpp"

int main(int argc, char** argv) {
  return cmod::cli::run(argc, argv);
}
