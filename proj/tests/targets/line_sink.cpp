// Fuzz target that appends every line it reads to the file named by argv[1],
// optionally sleeping after each line to exercise backpressure.
#include <chrono>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

int main(int argc, char** argv) {
    if (argc < 2) {
        return 2;
    }
    std::ofstream out(argv[1], std::ios::app);
    long delay_us = argc > 2 ? std::stol(argv[2]) : 0;
    std::string line;
    while (std::getline(std::cin, line)) {
        out << line << '\n';
        if (delay_us > 0) {
            std::this_thread::sleep_for(std::chrono::microseconds(delay_us));
        }
    }
    return 0;
}
