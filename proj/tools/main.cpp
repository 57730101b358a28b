#include <csignal>
#include <exception>
#include <iostream>

#include "caprimes/cli.hpp"

namespace {

extern "C" void on_interrupt(int) { caprimes::interrupt_flag().store(true); }

}  // namespace

int main(int argc, char** argv) {
    std::signal(SIGINT, on_interrupt);
    std::signal(SIGTERM, on_interrupt);
    try {
        return caprimes::run_cli(argc, argv, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return caprimes::kExitInternal;
    }
}
