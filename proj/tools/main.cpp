#include "app.hpp"

int main(int argc, char** argv) { return molcomm::app::main_entry(argc, argv); }
