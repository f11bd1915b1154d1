#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "mplcp/cli.hpp"

int main(int argc, char** argv) {
  try {
    return mplcp::run_cli(std::vector<std::string>(argv + 1, argv + argc));
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << "\n";
    return mplcp::kExitConfigError;
  }
}
