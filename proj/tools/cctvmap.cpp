#include <iostream>

#include "cctv/service/cli.hpp"

int main(int argc, char** argv) { return cctv::service::run_cli(argc, argv, std::cout, std::cerr); }
