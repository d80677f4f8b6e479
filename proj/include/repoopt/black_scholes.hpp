#pragma once

namespace repoopt {

/// Lognormal Black-Scholes inputs. `tenor` is in years, `rate` and `vol` per annum.
struct BsInputs {
    double spot = 0.0;
    double strike = 0.0;
    double rate = 0.0;
    double vol = 0.0;
    double tenor = 0.0;
};

void validate(const BsInputs& in);

/// European call. vol == 0 gives max(spot - strike e^{-rT}, 0).
double bs_call(const BsInputs& in);

/// European put. Computed from its own d1/d2 terms, not through parity.
double bs_put(const BsInputs& in);

} // namespace repoopt
