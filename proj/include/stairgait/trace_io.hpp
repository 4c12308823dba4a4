#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "stairgait/sim.hpp"

namespace stairgait {

enum class TraceFormat { Csv, Json };

/// t, theta1..theta9, leg0_{H,K,A,S,T}_{x,z}, leg1_{H,K,A,S,T}_{x,z}, zmp_x, cog_x.
const std::vector<std::string>& trace_columns();

/// CSV: header line plus one row per sample, 17 significant digits.
/// JSON: {"format", "version", "metadata", "columns", "data": {column: [...]}}.
std::string export_trace(const GaitTrace& trace, TraceFormat format);
void write_trace(const std::filesystem::path& path, const GaitTrace& trace, TraceFormat format);

/// Inverse of export_trace for the exported columns (and metadata for JSON).
GaitTrace import_trace(std::string_view text, TraceFormat format);

}  // namespace stairgait
