// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#include "edaflow/error.hpp"

namespace edaflow {

const char* err_name(ErrCode code) {
  switch (code) {
    case ErrCode::MissingRequiredPlaceholder: return "MissingRequiredPlaceholder";
    case ErrCode::UnresolvedPlaceholder: return "UnresolvedPlaceholder";
    case ErrCode::DepthExceeded: return "DepthExceeded";
    case ErrCode::TemplateInvalid: return "TemplateInvalid";
    case ErrCode::InvalidRequest: return "InvalidRequest";
    case ErrCode::WorkspaceConflict: return "WorkspaceConflict";
    case ErrCode::MissingUpstream: return "MissingUpstream";
    case ErrCode::ExecutorFailure: return "ExecutorFailure";
    case ErrCode::NegativeIndex: return "NegativeIndex";
    case ErrCode::BackendUnavailable: return "BackendUnavailable";
    case ErrCode::Timeout: return "Timeout";
    case ErrCode::WorkspaceMissing: return "WorkspaceMissing";
    case ErrCode::NoMatches: return "NoMatches";
    case ErrCode::ArchiveWriteFailed: return "ArchiveWriteFailed";
    case ErrCode::EmptyPrompt: return "EmptyPrompt";
    case ErrCode::ModelClientUnavailable: return "ModelClientUnavailable";
    case ErrCode::NoStageDetected: return "NoStageDetected";
    case ErrCode::StageFailed: return "StageFailed";
    case ErrCode::SessionUnknown: return "SessionUnknown";
    case ErrCode::SchemaTooSmall: return "SchemaTooSmall";
    case ErrCode::UnterminatedString: return "UnterminatedString";
    case ErrCode::UnterminatedBrace: return "UnterminatedBrace";
    case ErrCode::PortInUse: return "PortInUse";
    case ErrCode::ConfigInvalid: return "ConfigInvalid";
    case ErrCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrCode code, const std::string& message)
    : std::runtime_error(std::string(err_name(code)) + ": " + message), code_(code) {}

void raise(ErrCode code, const std::string& message) { throw Error(code, message); }

}  // namespace edaflow
