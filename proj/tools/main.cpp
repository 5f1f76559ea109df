#include "commands.hpp"

int main(int argc, char** argv) {
  return ppimesh::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
