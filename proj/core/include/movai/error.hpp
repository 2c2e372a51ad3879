#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace movai {

/// Base class of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A non-filler word that the lexicon does not know. `position` is the
/// zero-based index of the word in the whitespace-split prompt and `column`
/// the zero-based character offset.
class UnknownWord : public Error {
 public:
  UnknownWord(std::string word, std::size_t position, std::size_t column);
  const std::string& word() const { return word_; }
  std::size_t position() const { return position_; }
  std::size_t column() const { return column_; }

 private:
  std::string word_;
  std::size_t position_;
  std::size_t column_;
};

/// Token sequence outside the clause grammar; `position` indexes the token list.
class GrammarError : public Error {
 public:
  GrammarError(std::size_t position, std::string expected, std::size_t column = 0);
  std::size_t position() const { return position_; }
  const std::string& expected() const { return expected_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t position_;
  std::string expected_;
  std::size_t column_;
};

class EmptyPrompt : public Error {
 public:
  EmptyPrompt() : Error("empty prompt") {}
};

class LayoutUnsatisfiable : public Error {
 public:
  LayoutUnsatisfiable(double residual, std::size_t relation);
  double residual() const { return residual_; }
  std::size_t relation() const { return relation_; }

 private:
  double residual_;
  std::size_t relation_;
};

class MissingVerb : public Error {
 public:
  explicit MissingVerb(int entity);
  int entity() const { return entity_; }

 private:
  int entity_;
};

class MissingAnnotations : public Error {
 public:
  using Error::Error;
};

class EmptyConditioning : public Error {
 public:
  EmptyConditioning() : Error("conditioning matrix has no rows") {}
};

class ZeroVector : public Error {
 public:
  ZeroVector() : Error("zero-norm embedding") {}
};

class InsufficientSamples : public Error {
 public:
  InsufficientSamples(std::size_t got, std::size_t needed);
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed document or binary file. `location` is a line number for text
/// formats and a byte offset for binary formats.
class FormatError : public Error {
 public:
  FormatError(std::uint64_t location, std::string reason);
  std::uint64_t location() const { return location_; }
  const std::string& reason() const { return reason_; }

 private:
  std::uint64_t location_;
  std::string reason_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace movai
