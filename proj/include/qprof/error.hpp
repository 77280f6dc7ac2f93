// Copyright 2026 The qprof Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qprof {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define QPROF_DEFINE_ERROR(Name) \
  class Name : public Error {    \
   public:                       \
    using Error::Error;          \
  }

// Circuit / frontend.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& msg, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};
QPROF_DEFINE_ERROR(UnsupportedFeature);
QPROF_DEFINE_ERROR(OperandOutOfRange);
QPROF_DEFINE_ERROR(RecursionLimit);
QPROF_DEFINE_ERROR(UnserializableGate);
QPROF_DEFINE_ERROR(InvalidCircuit);
QPROF_DEFINE_ERROR(MissingDuration);

// Analysis.
QPROF_DEFINE_ERROR(KTooLarge);
QPROF_DEFINE_ERROR(SingleCluster);
QPROF_DEFINE_ERROR(MissingFeature);
QPROF_DEFINE_ERROR(InvalidArgument);

// Devices.
QPROF_DEFINE_ERROR(SchemaError);
QPROF_DEFINE_ERROR(DisconnectedTopology);
QPROF_DEFINE_ERROR(BadProbability);

// Mapping and metrics.
QPROF_DEFINE_ERROR(TooManyQubits);
QPROF_DEFINE_ERROR(UnroutableGate);
QPROF_DEFINE_ERROR(NoDecomposition);
QPROF_DEFINE_ERROR(ZeroBaseline);
QPROF_DEFINE_ERROR(MissingErrorRate);

// Workbench.
QPROF_DEFINE_ERROR(BadFraction);
QPROF_DEFINE_ERROR(EmptyCorpus);
QPROF_DEFINE_ERROR(IoError);

#undef QPROF_DEFINE_ERROR

}  // namespace qprof
