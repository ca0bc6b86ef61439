#pragma once

// Trajectory / sheet serialization. CSV carries full-precision scientific
// notation; JSON round-trips doubles bit-exactly.

#include <iosfwd>
#include <string>

#include "jetflow/integrate.hpp"

namespace jetflow {

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, std::size_t n);
void write_trajectory_json(std::ostream& os, const Trajectory& traj, std::size_t n);
void write_sheet_csv(std::ostream& os, const Sheet& sheet);
void write_sheet_json(std::ostream& os, const Sheet& sheet);

Trajectory read_trajectory_json(std::istream& is);
Trajectory read_trajectory_csv(std::istream& is);
Sheet read_sheet_json(std::istream& is);

} // namespace jetflow
