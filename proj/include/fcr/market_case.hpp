#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fcr {

enum class MarketCase { WO_FCR, FCR_N, FCR_DU, FCR_DD, MULTI };

inline constexpr std::array<MarketCase, 5> kAllCases = {MarketCase::WO_FCR, MarketCase::FCR_N, MarketCase::FCR_DU,
                                                       MarketCase::FCR_DD, MarketCase::MULTI};

inline std::string_view to_string(MarketCase c) {
  switch (c) {
    case MarketCase::WO_FCR: return "WO_FCR";
    case MarketCase::FCR_N: return "FCR_N";
    case MarketCase::FCR_DU: return "FCR_DU";
    case MarketCase::FCR_DD: return "FCR_DD";
    case MarketCase::MULTI: return "MULTI";
  }
  return "?";
}

inline MarketCase parse_market_case(std::string_view s) {
  for (auto c : kAllCases)
    if (to_string(c) == s) return c;
  throw std::invalid_argument("unknown case '" + std::string(s) + "'");
}

inline bool allows_n(MarketCase c) { return c == MarketCase::FCR_N || c == MarketCase::MULTI; }
inline bool allows_du(MarketCase c) { return c == MarketCase::FCR_DU || c == MarketCase::MULTI; }
inline bool allows_dd(MarketCase c) { return c == MarketCase::FCR_DD || c == MarketCase::MULTI; }

}  // namespace fcr
