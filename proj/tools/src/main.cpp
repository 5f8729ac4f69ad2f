#include <iostream>

#include "vxl/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return vxl::app::run(args, std::cout, std::cerr);
}
