#pragma once

#include <iosfwd>

#include <json.hpp>

#include "gbc/engine.hpp"

namespace gbc {

inline constexpr int kStatsSchema = 1;

// Field names follow CountReport; the count is a decimal string because it
// can exceed 64 bits.
nlohmann::json report_to_json(const CountReport& report);

void write_stats(std::ostream& out, const nlohmann::json& stats);

}  // namespace gbc
