#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "dwellclick/exact_sum.hpp"

using dwell::ExactSum;
using dwell::exact_sum;

TEST_CASE("exact sum survives catastrophic cancellation") {
    const std::vector<double> v{1e100, 1.0, -1e100};
    CHECK(exact_sum(v) == 1.0);
    const std::vector<double> w{0.1, 0.2, 0.3, -0.6};
    CHECK(exact_sum(w) == 2.7755575615628914e-17);  // exact value of the binary sum
}

TEST_CASE("exact sum is independent of order") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> dist(0.01, 5.0);
    std::vector<double> v(20000);
    for (auto& x : v) x = dist(gen) * (gen() % 3 == 0 ? 1e-3 : 1.0);
    const double ref = exact_sum(v);
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(v.begin(), v.end(), gen);
        CHECK(exact_sum(v) == ref);
    }
    ExactSum left, right;
    for (std::size_t i = 0; i < v.size(); ++i) (i % 2 ? left : right).add(v[i]);
    left.merge(right);
    CHECK(left.value() == ref);
}
