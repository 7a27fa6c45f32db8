/*
 * Copyright 2026 histobench contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace histobench {

/// Process exit codes the CLI maps error categories onto.
enum class ExitCode : int {
  ok = 0,
  config_error = 2,
  data_error = 3,
  training_error = 4,
  partial_completion = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& w) : Error(ExitCode::config_error, w) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& w) : Error(ExitCode::data_error, w) {}
};

class TrainingError : public Error {
 public:
  explicit TrainingError(const std::string& w) : Error(ExitCode::training_error, w) {}
};

#define HISTOBENCH_DEFINE_ERROR(name, base)                      \
  class name : public base {                                     \
   public:                                                       \
    explicit name(const std::string& w) : base(#name ": " + w) {} \
  }

// dataset discovery / manifest
HISTOBENCH_DEFINE_ERROR(MissingRoot, DataError);
HISTOBENCH_DEFINE_ERROR(NoClassesFound, DataError);
HISTOBENCH_DEFINE_ERROR(EmptyClass, DataError);
HISTOBENCH_DEFINE_ERROR(AlreadySplit, DataError);
HISTOBENCH_DEFINE_ERROR(InvalidSpec, DataError);
HISTOBENCH_DEFINE_ERROR(DecodeFailure, DataError);
HISTOBENCH_DEFINE_ERROR(IoFailure, DataError);

// augmentation
HISTOBENCH_DEFINE_ERROR(VariantOutOfRange, DataError);
HISTOBENCH_DEFINE_ERROR(AlreadyExpanded, DataError);

// model zoo
HISTOBENCH_DEFINE_ERROR(UnknownArchitecture, ConfigError);
HISTOBENCH_DEFINE_ERROR(WeightsUnavailable, TrainingError);
HISTOBENCH_DEFINE_ERROR(UnsupportedInputSize, ConfigError);
HISTOBENCH_DEFINE_ERROR(NotTransferMode, TrainingError);

// trainer
HISTOBENCH_DEFINE_ERROR(EmptySplit, TrainingError);
HISTOBENCH_DEFINE_ERROR(CheckpointCorrupt, TrainingError);
HISTOBENCH_DEFINE_ERROR(ClassCountMismatch, TrainingError);

// ensemble
HISTOBENCH_DEFINE_ERROR(SampleSetMismatch, DataError);
HISTOBENCH_DEFINE_ERROR(ClassSetMismatch, DataError);
HISTOBENCH_DEFINE_ERROR(LabelDisagreement, DataError);
HISTOBENCH_DEFINE_ERROR(ShapeMismatch, DataError);
HISTOBENCH_DEFINE_ERROR(ZeroRow, DataError);
HISTOBENCH_DEFINE_ERROR(MemberMissing, ConfigError);

// metrics
HISTOBENCH_DEFINE_ERROR(LengthMismatch, DataError);
HISTOBENCH_DEFINE_ERROR(LabelOutOfRange, DataError);
HISTOBENCH_DEFINE_ERROR(EmptyMatrix, DataError);

// experiment config
HISTOBENCH_DEFINE_ERROR(ParseError, ConfigError);
HISTOBENCH_DEFINE_ERROR(ValidationError, ConfigError);

#undef HISTOBENCH_DEFINE_ERROR

}  // namespace histobench
