#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

namespace driftbench {

// Deterministic random stream. Draws are hand-rolled on top of mt19937_64 so
// that the byte stream does not depend on the standard library's
// distribution implementations.
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : eng_(seed) {}

    // [0, 1), 53-bit resolution
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // standard normal pair (Box-Muller)
    std::pair<double, double> gauss_pair() {
        const double u1 = (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
    }

    // uniform integer in [0, n), rejection-sampled
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

    // Fisher-Yates, deterministic across platforms
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[static_cast<std::size_t>(below(i))]);
        }
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace driftbench
