#include "logtr/job.hpp"

int main(int argc, char** argv) { return logtr::run_cli(argc, argv); }
