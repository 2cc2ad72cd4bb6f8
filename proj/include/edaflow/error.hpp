// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#pragma once

#include <stdexcept>
#include <string>

namespace edaflow {

// Every failure the library raises carries one of these codes so callers
// (HTTP layer, CLI, agent) can map it to a wire error without string matching.
enum class ErrCode {
  // template engine
  MissingRequiredPlaceholder,
  UnresolvedPlaceholder,
  DepthExceeded,
  TemplateInvalid,

  // stage services / workspace
  InvalidRequest,
  WorkspaceConflict,
  MissingUpstream,
  ExecutorFailure,
  NegativeIndex,

  // flow executor
  BackendUnavailable,
  Timeout,
  WorkspaceMissing,
  NoMatches,
  ArchiveWriteFailed,

  // agent
  EmptyPrompt,
  ModelClientUnavailable,
  NoStageDetected,
  StageFailed,
  SessionUnknown,

  // benchmark generator
  SchemaTooSmall,

  // tcl tokenizer
  UnterminatedString,
  UnterminatedBrace,

  // hosting / config / io
  PortInUse,
  ConfigInvalid,
  IoError,
};

const char* err_name(ErrCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrCode code, const std::string& message);
  ErrCode code() const { return code_; }

 private:
  ErrCode code_;
};

[[noreturn]] void raise(ErrCode code, const std::string& message);

}  // namespace edaflow
