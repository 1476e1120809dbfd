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

#include "mlidar/error.hpp"

namespace mlidar {

const char* ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidVariant: return "InvalidVariant";
    case ErrorCode::kOverheadExceedsFrame: return "OverheadExceedsFrame";
    case ErrorCode::kSingularFit: return "SingularFit";
    case ErrorCode::kDegenerateMap: return "DegenerateMap";
    case ErrorCode::kRoiOutOfBounds: return "ROIOutOfBounds";
    case ErrorCode::kMissingFile: return "MissingFile";
    case ErrorCode::kMissingPair: return "MissingPair";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kMalformedHeader: return "MalformedHeader";
    case ErrorCode::kEmptyScene: return "EmptyScene";
    case ErrorCode::kNoOverlap: return "NoOverlap";
    case ErrorCode::kNoSamples: return "NoSamples";
    case ErrorCode::kEmptyMask: return "EmptyMask";
    case ErrorCode::kNonPositiveDepth: return "NonPositiveDepth";
    case ErrorCode::kDegenerateGeometry: return "DegenerateGeometry";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ToString(code)) + ": " + message),
      code_(code) {}

bool Error::is_usage_error() const {
  switch (code_) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kInvalidVariant:
    case ErrorCode::kOverheadExceedsFrame:
    case ErrorCode::kRoiOutOfBounds:
      return true;
    default:
      return false;
  }
}

}  // namespace mlidar
