#include <iostream>

#include "persuasion/gateway/cli.h"

int main(int argc, char** argv) {
  return persuasion::gateway::RunCli(argc, argv, std::cout, std::cerr);
}
