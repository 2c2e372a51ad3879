#include "movai/parser.hpp"

#include <cctype>
#include <optional>

#include "movai/error.hpp"

namespace movai {
namespace {

// walking -> walk, running -> run, sliding -> slide.
std::optional<std::string> gerund_stem(const std::string& w, const Lexicon& lex) {
  if (w.size() <= 4 || !w.ends_with("ing")) return std::nullopt;
  std::string stem = w.substr(0, w.size() - 3);
  if (lex.contains(stem)) return stem;
  if (stem.size() >= 2 && stem[stem.size() - 1] == stem[stem.size() - 2]) {
    std::string undoubled = stem.substr(0, stem.size() - 1);
    if (lex.contains(undoubled)) return undoubled;
  }
  if (lex.contains(stem + "e")) return stem + "e";
  return std::nullopt;
}

}  // namespace

std::vector<Token> tokenize(std::string_view text, const Lexicon& lexicon) {
  std::vector<Token> tokens;
  std::size_t position = 0;
  std::size_t i = 0;
  bool any_word = false;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size()) break;
    const std::size_t column = i;
    std::string word;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) {
      const auto c = static_cast<unsigned char>(text[i]);
      if (std::isalnum(c)) word.push_back(static_cast<char>(std::tolower(c)));
      ++i;
    }
    if (word.empty()) continue;  // bare punctuation
    any_word = true;
    auto cat = lexicon.category(word);
    if (!cat) {
      if (auto stem = gerund_stem(word, lexicon)) {
        word = *stem;
        cat = lexicon.category(word);
      }
    }
    if (!cat) throw UnknownWord(word, position, column);
    if (*cat != WordCategory::Filler) tokens.push_back({word, *cat, position, column});
    ++position;
  }
  if (!any_word) throw EmptyPrompt();
  return tokens;
}

namespace {

class ClauseParser {
 public:
  ClauseParser(const std::vector<Token>& t, const Lexicon& lex) : tokens_(t), lex_(lex) {}

  SceneGraph run(std::string prompt) {
    graph_.prompt = std::move(prompt);
    if (tokens_.empty()) fail("noun-or-adjective");
    clause();
    while (pos_ < tokens_.size()) {
      if (peek() != WordCategory::Conjunction) fail("preposition-or-and");
      ++pos_;
      clause();
    }
    return std::move(graph_);
  }

 private:
  std::optional<WordCategory> peek() const {
    if (pos_ >= tokens_.size()) return std::nullopt;
    return tokens_[pos_].category;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    const std::size_t column = pos_ < tokens_.size() ? tokens_[pos_].column : 0;
    throw GrammarError(pos_, expected, column);
  }

  // adjective* noun
  int noun_phrase(Role role) {
    std::vector<Attribute> attrs;
    while (peek() == WordCategory::Adjective) {
      const auto& w = tokens_[pos_].word;
      const auto& adj = lex_.adjective(w);
      attrs.push_back({w, adj.kind, adj.color, adj.size_multiplier});
      ++pos_;
    }
    if (peek() != WordCategory::Noun) fail(attrs.empty() ? "noun-or-adjective" : "noun");
    const auto& w = tokens_[pos_++].word;
    const auto& noun = lex_.noun(w);
    Entity e;
    e.id = static_cast<int>(graph_.objects.size());
    e.cls = w;
    e.role = role;
    e.shape = noun.shape;
    e.size = noun.size;
    e.color = noun.color;
    for (const auto& a : attrs) {
      if (a.kind == AttributeKind::Color)
        e.color = a.color;
      else
        e.size *= a.multiplier;
    }
    e.attributes = std::move(attrs);
    graph_.objects.push_back(std::move(e));
    return graph_.objects.back().id;
  }

  void clause() {
    const int actor = noun_phrase(Role::Actor);
    std::optional<Action> action;
    if (peek() == WordCategory::Verb) {
      const auto& w = tokens_[pos_++].word;
      const auto& verb = lex_.verb(w);
      action = Action{w, verb.trajectory, verb.speed, 1.0, {}};
    }
    std::vector<std::string> modifiers;
    double multiplier = 1.0;
    while (peek() == WordCategory::Modifier) {
      const auto& w = tokens_[pos_++].word;
      modifiers.push_back(w);
      multiplier *= lex_.modifier(w);
    }
    if (action) {
      action->modifiers = std::move(modifiers);
      action->multiplier = multiplier;
      graph_.objects[static_cast<std::size_t>(actor)].action = std::move(action);
    } else if (!modifiers.empty()) {
      // A modifier needs a verb to act on.
      pos_ -= modifiers.size();
      fail("verb");
    }
    while (peek() == WordCategory::Preposition) {
      const auto& w = tokens_[pos_++].word;
      const auto kind = lex_.preposition(w);
      const int ground = noun_phrase(Role::Ground);
      graph_.relations.push_back({actor, w, kind, ground});
    }
  }

  const std::vector<Token>& tokens_;
  const Lexicon& lex_;
  std::size_t pos_ = 0;
  SceneGraph graph_;
};

}  // namespace

SceneGraph parse(const std::vector<Token>& tokens, const Lexicon& lexicon, std::string prompt) {
  return ClauseParser(tokens, lexicon).run(std::move(prompt));
}

SceneGraph parse_prompt(std::string_view text, const Lexicon& lexicon) {
  return parse(tokenize(text, lexicon), lexicon, std::string(text));
}

}  // namespace movai
