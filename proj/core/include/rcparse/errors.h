// Copyright 2026 The rcparse Authors.
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

#ifndef RCPARSE_ERRORS_H_
#define RCPARSE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace rcparse {

// Machine-readable failure codes shared by every module. The textual names
// returned by ErrorCodeName() are part of the CLI and HTTP contracts.
enum class ErrorCode {
  kMalformedNode,
  kParse,
  kInvalidWorld,
  kGripperOccupied,
  kEmptyColumn,
  kGripperEmpty,
  kUnsupportedPlacement,
  kOffBoardCell,
  kNoGrounding,
  kAmbiguous,
  kPhysicallyInvalid,
  kUnboundReference,
  kOffBoard,
  kLandmarkUngroundable,
  kMeasureNotAdmitted,
  kUnknownType,
  kOverlappingAlignment,
  kEmptyCorpus,
  kIllegalIob2,
  kOov,
  kNoParse,
  kEmptyForest,
  kAllRejected,
  kNoUniqueParse,
  kNoAntecedent,
  kMalformedRecord,
  kIo,
  kUsage,
  kUnknownSession,
  kEmptyHistory,
  kInvalidArgument,
};

const char *ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message, int index = -1)
      : std::runtime_error(message), code_(code), index_(index) {}

  ErrorCode code() const { return code_; }

  // Event index, character offset or line number, depending on the code;
  // -1 when not applicable.
  int index() const { return index_; }

 private:
  ErrorCode code_;
  int index_;
};

}  // namespace rcparse

#endif  // RCPARSE_ERRORS_H_
