#include "inr/commands.hpp"

int main(int argc, char** argv) {
  return inr::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
