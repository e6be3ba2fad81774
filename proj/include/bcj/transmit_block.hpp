#pragma once

#include <vector>

namespace bcj {

/// One channel use: message symbols, jamming symbols and the resulting channel inputs.
struct TransmitBlock {
    std::vector<int> v;     // V_2..V_{M+1}, integers in [-Q, Q]
    std::vector<int> u;     // U_1..U_{M+1}, integers in [-Q, Q]
    std::vector<double> x;  // X_1..X_{M+1}

    bool operator==(const TransmitBlock&) const = default;
};

}  // namespace bcj
