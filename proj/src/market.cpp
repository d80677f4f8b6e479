#include "repoopt/market.hpp"

#include "repoopt/errors.hpp"

#include <cmath>

namespace repoopt {

void validate(const MarketParams& m) {
    if (!std::isfinite(m.spot_price) || m.spot_price <= 0.0)
        throw ValidationError("spot price must be positive");
    if (!std::isfinite(m.volatility) || m.volatility < 0.0)
        throw ValidationError("volatility must be non-negative");
    if (!std::isfinite(m.intrinsic_yield))
        throw ValidationError("intrinsic yield must be finite");
    if (!std::isfinite(m.risk_free))
        throw ValidationError("risk-free rate must be finite");
    if (m.tenor_days < 1)
        throw ValidationError("tenor must be at least one day");
    if (m.day_count != 360 && m.day_count != 365)
        throw ValidationError("day count must be 360 or 365");
}

} // namespace repoopt
