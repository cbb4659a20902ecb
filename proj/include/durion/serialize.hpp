#pragma once

#include <string>

#include <json.hpp>

#include "durion/scoreops.hpp"

namespace durion {

/// {"delta": "p/q", "voices": [{"divs": [...], "onsets": [...], "voice": n}]}
inline std::string to_json(const DivsEncoding& encoding) {
  nlohmann::json voices = nlohmann::json::array();
  for (std::size_t i = 0; i < encoding.divs.size(); ++i)
    voices.push_back({{"voice", i},
                      {"divs", encoding.divs[i]},
                      {"onsets", encoding.onsets[i]}});
  const nlohmann::json doc = {{"delta", encoding.delta.str()},
                              {"voices", voices}};
  return doc.dump(2) + "\n";
}

/// {"delta": "p/q", "columns": n, "rows": {"60": [counts...]}}
inline std::string to_json(const Pianoroll& roll) {
  nlohmann::json rows = nlohmann::json::object();
  for (const auto& [pitch, cells] : roll.rows)
    rows[std::to_string(pitch)] = cells;
  const nlohmann::json doc = {{"delta", roll.delta.str()},
                              {"columns", roll.columns},
                              {"rows", rows}};
  return doc.dump(2) + "\n";
}

/// Header `pitch,c0,c1,...`, then one row per sounding pitch in ascending
/// MIDI order with integer cell counts.
inline std::string to_csv(const Pianoroll& roll) {
  std::string out = "pitch";
  for (long long c = 0; c < roll.columns; ++c)
    out += ",c" + std::to_string(c);
  out += "\n";
  for (const auto& [pitch, cells] : roll.rows) {
    out += std::to_string(pitch);
    for (const auto cell : cells) out += "," + std::to_string(cell);
    out += "\n";
  }
  return out;
}

}  // namespace durion
