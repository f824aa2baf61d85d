// Prints gamma(s, chi, psi) for a few characters of Q_3 and of R, with the regularized value at 0.

#include <iostream>

#include "plancherel/localfactors.hpp"

using namespace plancherel::local;

int main() {
    const auto qp = FieldData::padic(3);
    const auto r = FieldData::real();
    for (const auto& [f, chi] : {std::pair{qp, CharData::trivial()}, std::pair{qp, CharData::eta_char()},
                                 std::pair{r, CharData::trivial()}, std::pair{r, CharData::real_char(1)}}) {
        const auto g = tate_gamma(chi, f);
        const auto st = g.star_zero();
        std::cout << f.label() << "  " << chi.label() << "\n  gamma = " << g.to_string() << "\n  order at 0 = "
                  << st.order << ", gamma*(0) = " << st.value << "\n";
    }
}
