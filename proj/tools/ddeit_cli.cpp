#include "ddeit/run.hpp"

int main(int argc, char** argv) {
  return ddeit::run(std::vector<std::string>(argv + 1, argv + argc));
}
