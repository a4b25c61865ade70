// Copyright 2026 The coevo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COEVO_IO_HPP_
#define COEVO_IO_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "coevo/analysis.hpp"
#include "coevo/dynamics.hpp"
#include "coevo/equilibrium.hpp"
#include "coevo/game_model.hpp"
#include "coevo/reduction.hpp"

namespace coevo::io {

// Shortest text that round-trips through strtod (17 significant digits).
std::string FormatReal(double v);

// Game and system documents are JSON. Lines starting with '#' are comments
// and may precede the document (every file this library writes starts with
// one). Parse failures throw kParse naming the source, line and field.
PolymatrixGame ParseGame(std::string_view text, const std::string& source);
PolymatrixGame LoadGame(const std::string& path);
std::string SerializeGame(const PolymatrixGame& game, const std::string& header);

TimeEvolvingSystem ParseSystem(std::string_view text, const std::string& source);
TimeEvolvingSystem LoadSystem(const std::string& path);
std::string SerializeSystem(const TimeEvolvingSystem& system,
                            const std::string& header);

// CSV: `t,x_0_0,x_0_1,...`, player-major. The layout is recovered from the
// column names when reading.
std::string SerializeTrajectory(const Trajectory& traj, const std::string& header);
Trajectory ParseTrajectory(std::string_view text, const std::string& source);
Trajectory LoadTrajectory(const std::string& path);

std::string SerializeSeries(const Series& series, const std::string& header);
std::string SerializeSection(const std::vector<SectionCrossing>& crossings,
                             const Layout& layout, const std::string& header);

// `key = value` structured text.
std::string SerializeNash(const NashResult& result, const std::string& header);
std::string SerializeRecurrence(const RecurrenceStats& stats,
                                const std::string& header);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& contents);

}  // namespace coevo::io

#endif  // COEVO_IO_HPP_
