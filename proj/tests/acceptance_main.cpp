#include <iostream>

#include "sopq/acceptance.hpp"

int main() {
    int failed = 0;
    for (const auto& r : sopq::run_acceptance(std::cout)) failed += r.pass ? 0 : 1;
    std::cout << failed << " criteria failed\n";
    return failed == 0 ? 0 : 1;
}
