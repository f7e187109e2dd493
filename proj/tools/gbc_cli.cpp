#include <iostream>

#include "gbc/pipeline.hpp"

int main(int argc, char** argv) { return gbc::cli_main(argc, argv, std::cout, std::cerr); }
