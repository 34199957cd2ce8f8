#pragma once

#include <string>

#include <json.hpp>

#include "tiletrack/grid.hpp"

namespace tiletrack {

/// Write via temp file + rename so readers never observe partial output.
void atomic_write_text(const std::string& path, const std::string& content);

nlohmann::json load_json(const std::string& path);
void save_json(const nlohmann::json& j, const std::string& path, int indent = 2);

std::string read_text(const std::string& path);

/// {frame, tiles:[[i,j],...]} with tiles sorted row-major.
nlohmann::json polyomino_to_json(const Polyomino& p);
Polyomino polyomino_from_json(const nlohmann::json& j);

nlohmann::json mask_to_json(const RelevanceMask& mask);
RelevanceMask mask_from_json(const nlohmann::json& j);

} // namespace tiletrack
