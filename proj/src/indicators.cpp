#include "tickcep/indicators.hpp"

namespace tickcep {

std::string_view to_string(Advice advice) noexcept {
  return advice == Advice::Buy ? "BUY" : "SELL";
}

}  // namespace tickcep
