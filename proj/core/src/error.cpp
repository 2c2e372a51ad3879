#include "movai/error.hpp"

#include <utility>

namespace movai {

UnknownWord::UnknownWord(std::string word, std::size_t position, std::size_t column)
    : Error("unknown word '" + word + "' at position " + std::to_string(position)),
      word_(std::move(word)),
      position_(position),
      column_(column) {}

GrammarError::GrammarError(std::size_t position, std::string expected, std::size_t column)
    : Error("grammar error at token " + std::to_string(position) + ": expected " + expected),
      position_(position),
      expected_(std::move(expected)),
      column_(column) {}

LayoutUnsatisfiable::LayoutUnsatisfiable(double residual, std::size_t relation)
    : Error("layout unsatisfiable: relation " + std::to_string(relation) + " residual " +
            std::to_string(residual)),
      residual_(residual),
      relation_(relation) {}

MissingVerb::MissingVerb(int entity)
    : Error("actor entity " + std::to_string(entity) + " has no action"), entity_(entity) {}

InsufficientSamples::InsufficientSamples(std::size_t got, std::size_t needed)
    : Error("insufficient samples: got " + std::to_string(got) + ", need at least " +
            std::to_string(needed)) {}

FormatError::FormatError(std::uint64_t location, std::string reason)
    : Error("format error at " + std::to_string(location) + ": " + reason),
      location_(location),
      reason_(std::move(reason)) {}

}  // namespace movai
