#include <string>
#include <vector>

#include "orderstat/cli.hpp"

int main(int argc, char** argv) {
  return orderstat::cli_dispatch(std::vector<std::string>(argv, argv + argc));
}
