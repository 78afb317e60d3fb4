#include <iostream>

#include "racelab/app.hpp"

int main(int argc, char** argv) {
  return racelab::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
