#pragma once

#include <span>
#include <vector>

namespace dwell {

// Running sum kept as a list of non-overlapping partials (Shewchuk). The
// rounded result depends only on the multiset of added values, so folding
// records in any order gives a bit-identical total.
class ExactSum {
  public:
    void add(double x);
    void merge(const ExactSum& other);
    double value() const;

  private:
    std::vector<double> partials_;
};

double exact_sum(std::span<const double> values);

}  // namespace dwell
