// Copyright 2026 The mlidar Authors.
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

#include <stdexcept>
#include <string>

namespace mlidar {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidVariant,
  kOverheadExceedsFrame,
  kSingularFit,
  kDegenerateMap,
  kRoiOutOfBounds,
  kMissingFile,
  kMissingPair,
  kDimensionMismatch,
  kMalformedHeader,
  kEmptyScene,
  kNoOverlap,
  kNoSamples,
  kEmptyMask,
  kNonPositiveDepth,
  kDegenerateGeometry,
};

const char* ToString(ErrorCode code);

/// All library failures are reported with this type. The code lets callers
/// (the CLI in particular) separate usage mistakes from bad data.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

  /// True for errors caused by the caller's arguments rather than input data.
  bool is_usage_error() const;

 private:
  ErrorCode code_;
};

}  // namespace mlidar
