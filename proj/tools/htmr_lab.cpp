#include <iostream>
#include <string>
#include <vector>

#include "htmr_lab_app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return htmr::cli::run(args, std::cout, std::cerr);
}
