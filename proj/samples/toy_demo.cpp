// Checks the circle Plancherel formula on random test functions and prints the fitted density.

#include <iostream>

#include "plancherel/toyplancherel.hpp"

int main() {
    const auto r = plancherel::toy::verify_theorem(10, 64, 1e-6, 11, 4096, 1);
    std::cout << "max relative error " << r.max_rel_err << "\nfitted constant " << r.fitted_constant << " (expected "
              << r.expected_constant << ")\n";
    return r.pass() ? 0 : 1;
}
