// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace emograph {

/// Base class for all pipeline errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// audio
class UnsupportedFormatError : public Error { using Error::Error; };
class CorruptHeaderError : public Error { using Error::Error; };
class EmptyAudioError : public Error { using Error::Error; };
class BadFrameSpecError : public Error { using Error::Error; };

// calibration
class EmptyCorpusError : public Error { using Error::Error; };
class MissingFeatureError : public Error { using Error::Error; };

// backends
class BackendUnavailableError : public Error { using Error::Error; };
class MalformedRelationResponseError : public Error { using Error::Error; };

// emotion graph
class InconsistentComponentsError : public Error { using Error::Error; };
class BudgetInfeasibleError : public Error { using Error::Error; };

// model client
class RemoteFailureError : public Error { using Error::Error; };
class AuthError : public Error { using Error::Error; };
class TimeoutError : public Error { using Error::Error; };

// evaluation
class DuplicateIdError : public Error { using Error::Error; };
class UnknownLabelError : public Error { using Error::Error; };
class MissingAudioError : public Error { using Error::Error; };
class MissingSessionKeyError : public Error { using Error::Error; };

// configuration
class ConfigError : public Error { using Error::Error; };

}  // namespace emograph
