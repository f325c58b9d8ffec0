// Copyright 2026 The Narrev Authors.
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

#ifndef NARREV_LOGGING_H_
#define NARREV_LOGGING_H_

#include <memory>
#include <string_view>

#include <spdlog/spdlog.h>

namespace narrev {

// Library logger (stderr). The level comes from the NARRATIVE_LOG
// environment variable (trace, debug, info, warn, error, off); default warn.
spdlog::logger &Log();

// Overrides the level unless NARRATIVE_LOG is set. Unknown names turn
// logging off, as spdlog does.
void SetLogLevel(std::string_view level);

}  // namespace narrev

#endif  // NARREV_LOGGING_H_
