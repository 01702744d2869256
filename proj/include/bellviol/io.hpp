// Copyright 2026 The bellviol Authors
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

#pragma once

#include <filesystem>
#include <string>

#include "bellviol/qcore.hpp"

// Text file formats for states and settings (JSON documents).
//
// State:    {"d": 2, "n_sites": 2, "amplitudes": [[re, im], ...]}
//           amplitudes in index order, site 1 the most significant digit.
// Settings: {"d": 2, "n_sites": 2, "sites": [{"a0": [[re, im], ...],
//                                             "a1": [[re, im], ...]}, ...]}
//           each observable as d*d row-major [re, im] pairs.
//
// Doubles are written in shortest round-trip decimal form, so a write/read
// cycle reproduces every bit.

namespace bellviol::io {

std::string state_to_text(const PureState<double> &state);
PureState<double> state_from_text(const std::string &text);
void write_state(const std::filesystem::path &path, const PureState<double> &state);
PureState<double> read_state(const std::filesystem::path &path);

std::string settings_to_text(const MeasurementSettings<double> &settings);
MeasurementSettings<double> settings_from_text(const std::string &text);
void write_settings(const std::filesystem::path &path,
                    const MeasurementSettings<double> &settings);
MeasurementSettings<double> read_settings(const std::filesystem::path &path);

/// Whole file as a string; IoError names the path on failure.
std::string read_text_file(const std::filesystem::path &path);
void write_text_file(const std::filesystem::path &path, const std::string &text);

} // namespace bellviol::io
