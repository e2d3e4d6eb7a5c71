#include "displab/grid.hpp"

#include <stdexcept>
#include <string>

namespace displab {

Grid make_grid(int d, int n, double box_len) {
    if (d != 1 && d != 2)
        throw std::invalid_argument("make_grid: d must be 1 or 2, got " +
                                    std::to_string(d));
    if (n < 8 || (n & (n - 1)) != 0)
        throw std::invalid_argument(
            "make_grid: n must be a power of two >= 8, got " + std::to_string(n));
    if (!(box_len > 0.0))
        throw std::invalid_argument("make_grid: box length must be positive");
    return Grid{d, n, box_len};
}

}  // namespace displab
