#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "movai/lexicon.hpp"
#include "movai/scene_graph.hpp"

namespace movai {

struct Token {
  std::string word;          // lexicon form, e.g. "walk" for "walking"
  WordCategory category = WordCategory::Noun;
  std::size_t position = 0;  // index of the word in the prompt
  std::size_t column = 0;    // character offset in the prompt

  bool operator==(const Token&) const = default;
};

/// Case-folds, strips punctuation, drops fillers and maps gerunds to their
/// verb stem. Throws EmptyPrompt or UnknownWord.
std::vector<Token> tokenize(std::string_view text, const Lexicon& lexicon);

/// Grammar:
///   scene  := clause ("and" clause)*
///   clause := adjective* noun verb? modifier* (preposition adjective* noun)*
/// The first noun of a clause is its actor; prepositional nouns are ground
/// entities related to the actor. Throws GrammarError.
SceneGraph parse(const std::vector<Token>& tokens, const Lexicon& lexicon, std::string prompt = {});

/// tokenize followed by parse.
SceneGraph parse_prompt(std::string_view text, const Lexicon& lexicon);

}  // namespace movai
