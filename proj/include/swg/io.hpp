// Copyright 2026 The swg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace swg::io {

/// 12 significant digits, '.' decimal point, "nan"/"inf" for non-finite values.
std::string format_number(double value);

/// Writes through a temporary file and renames, so readers never see a torn file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view data);

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

}  // namespace swg::io
