#pragma once

// Per-click billing replay, summed exactly in MPFR and rounded once.
// Shares no code with revenue_impact.

#include <mpfr.h>

#include <map>
#include <string>
#include <vector>

#include "dwellclick/types.hpp"

namespace testsupport {

struct ReplayTotals {
    double chargeall, discard, smooth;
};

class MpfrSum {
  public:
    MpfrSum() {
        mpfr_init2(v_, 4096);
        mpfr_set_d(v_, 0.0, MPFR_RNDN);
    }
    ~MpfrSum() { mpfr_clear(v_); }
    MpfrSum(const MpfrSum&) = delete;
    MpfrSum& operator=(const MpfrSum&) = delete;
    void add(double x) { mpfr_add_d(v_, v_, x, MPFR_RNDN); }
    double value() const { return mpfr_get_d(v_, MPFR_RNDN); }

  private:
    mpfr_t v_;
};

inline ReplayTotals replay_billing(const std::vector<dwell::ClickRecord>& clicks,
                                   const std::map<std::string, double>& threshold_seconds, double default_seconds,
                                   const std::map<std::string, double>& factors) {
    MpfrSum charge, discard, smooth;
    for (const auto& c : clicks) {
        if (!c.cpc) continue;
        const auto t = threshold_seconds.find(c.app_id);
        const double cut = t == threshold_seconds.end() ? default_seconds : t->second;
        const bool accidental = !(c.dwell_seconds > cut);
        charge.add(*c.cpc);
        if (accidental) {
            const auto f = factors.find(c.app_id);
            smooth.add(*c.cpc * (f == factors.end() ? 1.0 : f->second));
        } else {
            discard.add(*c.cpc);
            smooth.add(*c.cpc);
        }
    }
    return {charge.value(), discard.value(), smooth.value()};
}

}  // namespace testsupport
