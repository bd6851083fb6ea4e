// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "kanlab/basins.hpp"

namespace kanlab {

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

/// Writes bytes via a temporary file in the same directory plus rename, so a
/// path never holds a partially written artifact.
void write_file_atomic(const std::string& path, std::string_view bytes);

std::string read_file(const std::string& path);

/// Binary PPM (P6, maxval 255) of a basin grid. Attractor0 is blue (0,0,255),
/// Attractor1 red (255,0,0), Undecided black. Image row 0 is the top of the
/// plot, i.e. the grid row with the largest y.
std::string ppm_bytes(const BasinLabelGrid& grid);

/// CSV of mixed-box statistics over all admissible scales.
/// Header: scale_j,mixed_fraction,mixed_count,total_boxes
std::string intermingle_csv(const BasinLabelGrid& grid);

/// Fixed-format helpers so artifact files are byte-stable across runs.
std::string format_double(double v, const char* fmt = "%.10g");

}  // namespace kanlab
