#pragma once
// GridFunction persistence: a one-line magic, a JSON header describing the
// group and box, then the samples as raw little-endian float64 pairs
// (re, im) in flat row-major order.  Plus a CSV export for plotting.

#include <filesystem>

#include "strata/grid.hpp"

namespace strata {

void save_grid_function(const GridFunction& f, const std::filesystem::path& file);
GridFunction load_grid_function(const std::filesystem::path& file);

// columns: one per coordinate, then re, im; %.12e throughout
void export_grid_csv(const GridFunction& f, const std::filesystem::path& file);

}  // namespace strata
