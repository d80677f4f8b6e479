#include "repoopt/errors.hpp"

#include <fmt/format.h>

namespace repoopt {

LiquidityError::LiquidityError(int step, const std::string& condition, double slack)
    : std::runtime_error(fmt::format("liquidity condition '{}' violated at step {} (slack {:.6f})",
                                     condition, step, slack)),
      step_(step), condition_(condition), slack_(slack) {}

} // namespace repoopt
