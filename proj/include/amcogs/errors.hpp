// Error types for the toolkit. Every failure mode callers are expected to
// handle gets its own type; everything derives from amcogs::Error.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace amcogs {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- logical forms ---
struct SyntaxError : Error {
  std::size_t offset;
  SyntaxError(const std::string& msg, std::size_t off)
      : Error(msg + " (byte " + std::to_string(off) + ")"), offset(off) {}
};
struct ArityError : Error {
  using Error::Error;
};
struct UnalignedName : Error {
  using Error::Error;
};

// --- conversion ---
struct ConvertError : Error {
  using Error::Error;
};
struct RootAmbiguity : ConvertError {
  using ConvertError::ConvertError;
};
struct UnknownToken : ConvertError {
  using ConvertError::ConvertError;
};
struct NotAPrimitive : ConvertError {
  using ConvertError::ConvertError;
};
struct MalformedGraph : ConvertError {
  using ConvertError::ConvertError;
};

// --- algebra ---
struct AlgebraError : Error {
  using Error::Error;
};
struct NoSuchSource : AlgebraError {
  using AlgebraError::AlgebraError;
};
struct TypeClash : AlgebraError {
  using AlgebraError::AlgebraError;
};
struct LabelClash : AlgebraError {
  using AlgebraError::AlgebraError;
};
struct ModifierWithOpenSources : AlgebraError {
  using AlgebraError::AlgebraError;
};
struct IllTyped : AlgebraError {
  using AlgebraError::AlgebraError;
};
struct NonEmptyRootType : AlgebraError {
  using AlgebraError::AlgebraError;
};

// --- decomposition ---
struct NonDecomposable : Error {
  using Error::Error;
};

// --- decoding ---
struct NoParse : Error {
  using Error::Error;
};

// --- corpus / io / config ---
struct FormatError : Error {
  using Error::Error;
};
struct LengthMismatch : Error {
  using Error::Error;
};
struct EmptyCorpus : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

// --- syntax tools ---
struct UnknownLabel : Error {
  using Error::Error;
};

}  // namespace amcogs
