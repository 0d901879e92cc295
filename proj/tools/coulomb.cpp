#include "app/commands.hpp"

int main(int argc, char** argv) { return coulomb::app::run_cli(argc, argv); }
