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

#include "rcparse/errors.h"

namespace rcparse {

const char *ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedNode: return "malformed-node";
    case ErrorCode::kParse: return "parse-error";
    case ErrorCode::kInvalidWorld: return "invalid-world";
    case ErrorCode::kGripperOccupied: return "gripper-occupied";
    case ErrorCode::kEmptyColumn: return "empty-column";
    case ErrorCode::kGripperEmpty: return "gripper-empty";
    case ErrorCode::kUnsupportedPlacement: return "unsupported-placement";
    case ErrorCode::kOffBoardCell: return "off-board-cell";
    case ErrorCode::kNoGrounding: return "no-grounding";
    case ErrorCode::kAmbiguous: return "ambiguous";
    case ErrorCode::kPhysicallyInvalid: return "physically-invalid";
    case ErrorCode::kUnboundReference: return "unbound-reference";
    case ErrorCode::kOffBoard: return "off-board";
    case ErrorCode::kLandmarkUngroundable: return "landmark-ungroundable";
    case ErrorCode::kMeasureNotAdmitted: return "measure-not-admitted";
    case ErrorCode::kUnknownType: return "unknown-type";
    case ErrorCode::kOverlappingAlignment: return "overlapping-alignment";
    case ErrorCode::kEmptyCorpus: return "empty-corpus";
    case ErrorCode::kIllegalIob2: return "illegal-iob2";
    case ErrorCode::kOov: return "oov";
    case ErrorCode::kNoParse: return "no-parse";
    case ErrorCode::kEmptyForest: return "empty-forest";
    case ErrorCode::kAllRejected: return "all-rejected";
    case ErrorCode::kNoUniqueParse: return "no-unique-parse";
    case ErrorCode::kNoAntecedent: return "no-antecedent";
    case ErrorCode::kMalformedRecord: return "malformed-record";
    case ErrorCode::kIo: return "io-error";
    case ErrorCode::kUsage: return "usage";
    case ErrorCode::kUnknownSession: return "unknown-session";
    case ErrorCode::kEmptyHistory: return "empty-history";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
  }
  return "unknown";
}

}  // namespace rcparse
