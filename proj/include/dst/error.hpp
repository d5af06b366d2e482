#pragma once

#include <stdexcept>
#include <string>

namespace dst {

enum class ErrorKind {
    InvariantViolation,
    TooFewPoints,
    DimMismatch,
    ShapeMismatch,
    UnseenPair,
    NotInvertible,
    NotBlockConstant,
    LengthNotDivisible,
    NegativeDuration,
    EmptySequence,
    EmptyMatrix,
    EmptyCorpus,
    LengthMismatch,
    FrameShiftMismatch,
    EmptyReference,
    NoVoicedOverlap,
    HeterogeneousCorpus,
    BadMagic,
    TruncatedFile,
    NonFiniteValue,
    TokenOutOfRange,
    RaggedStreams,
    DuplicatePair,
    ZeroDuration,
    IoFailure,
    BadArgument,
};

const char* kind_name(ErrorKind kind);

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(kind_name(kind)) + ": " + message),
          kind_(kind),
          raw_(message) {}

    ErrorKind kind() const { return kind_; }

    // Message without the kind prefix, for re-wrapping with file context.
    const std::string& raw() const { return raw_; }

  private:
    ErrorKind kind_;
    std::string raw_;
};

}  // namespace dst
