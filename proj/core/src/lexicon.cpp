#include "movai/lexicon.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "movai/error.hpp"

namespace movai {
namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::pair<E, std::string_view>, N>& table, std::string_view s) {
  for (const auto& [e, name] : table)
    if (name == s) return e;
  return std::nullopt;
}

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& table, E e) {
  for (const auto& [v, name] : table)
    if (v == e) return name;
  return "?";
}

constexpr std::array<std::pair<Shape, std::string_view>, 2> kShapes{{{Shape::Circle, "circle"}, {Shape::Rect, "rect"}}};
constexpr std::array<std::pair<Trajectory, std::string_view>, 4> kTrajectories{
    {{Trajectory::Static, "static"}, {Trajectory::Linear, "linear"}, {Trajectory::Fall, "fall"}, {Trajectory::Spin, "spin"}}};
constexpr std::array<std::pair<AttributeKind, std::string_view>, 2> kAttributes{
    {{AttributeKind::Color, "color"}, {AttributeKind::Size, "size"}}};
constexpr std::array<std::pair<ConstraintKind, std::string_view>, 7> kConstraints{{{ConstraintKind::On, "on"},
                                                                                   {ConstraintKind::Under, "under"},
                                                                                   {ConstraintKind::LeftOf, "left_of"},
                                                                                   {ConstraintKind::RightOf, "right_of"},
                                                                                   {ConstraintKind::Across, "across"},
                                                                                   {ConstraintKind::In, "in"},
                                                                                   {ConstraintKind::Near, "near"}}};

bool is_lower_word(std::string_view w) {
  if (w.empty()) return false;
  for (char c : w)
    if (!std::islower(static_cast<unsigned char>(c))) return false;
  return true;
}

double parse_number(const std::string& tok, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw FormatError(line, "expected a number, got '" + tok + "'");
  }
  if (used != tok.size() || !std::isfinite(v)) throw FormatError(line, "expected a number, got '" + tok + "'");
  return v;
}

Rgb parse_rgb(const std::vector<std::string>& f, std::size_t at, std::size_t line) {
  Rgb c{};
  for (std::size_t i = 0; i < 3; ++i) {
    c[i] = parse_number(f.at(at + i), line);
    if (c[i] < 0.0 || c[i] > 1.0) throw FormatError(line, "color component outside [0,1]");
  }
  return c;
}

}  // namespace

std::string_view to_string(Shape s) { return name_of(kShapes, s); }
std::string_view to_string(Trajectory t) { return name_of(kTrajectories, t); }
std::string_view to_string(AttributeKind k) { return name_of(kAttributes, k); }
std::string_view to_string(ConstraintKind k) { return name_of(kConstraints, k); }
std::optional<Shape> shape_from_string(std::string_view s) { return lookup(kShapes, s); }
std::optional<Trajectory> trajectory_from_string(std::string_view s) { return lookup(kTrajectories, s); }
std::optional<AttributeKind> attribute_kind_from_string(std::string_view s) { return lookup(kAttributes, s); }
std::optional<ConstraintKind> constraint_from_string(std::string_view s) { return lookup(kConstraints, s); }

Lexicon Lexicon::parse(std::string_view text) {
  Lexicon lex;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> f;
    for (std::string tok; ls >> tok;) f.push_back(tok);
    if (f.empty()) continue;
    const std::string& cat = f[0];
    auto need = [&](std::size_t n) {
      if (f.size() != n) throw FormatError(line, cat + " entry expects " + std::to_string(n - 1) + " fields");
    };
    if (f.size() < 2) throw FormatError(line, "entry without a word");
    const std::string& word = f[1];
    if (!is_lower_word(word)) throw FormatError(line, "word '" + word + "' must be lowercase letters");
    try {
      if (cat == "noun") {
        need(7);
        auto shape = shape_from_string(f[2]);
        if (!shape) throw FormatError(line, "unknown shape '" + f[2] + "'");
        const double size = parse_number(f[3], line);
        if (!(size > 0.0)) throw FormatError(line, "noun size must be positive");
        lex.add_noun(word, {*shape, size, parse_rgb(f, 4, line)});
      } else if (cat == "verb") {
        need(4);
        auto traj = trajectory_from_string(f[2]);
        if (!traj || *traj == Trajectory::Static) throw FormatError(line, "unknown trajectory '" + f[2] + "'");
        const double speed = parse_number(f[3], line);
        if (!(speed > 0.0)) throw FormatError(line, "verb speed must be positive");
        lex.add_verb(word, {*traj, speed});
      } else if (cat == "adjective") {
        if (f.size() < 3) throw FormatError(line, "adjective entry needs a kind");
        if (f[2] == "color") {
          need(6);
          lex.add_adjective(word, {AttributeKind::Color, parse_rgb(f, 3, line), 1.0});
        } else if (f[2] == "size") {
          need(4);
          const double m = parse_number(f[3], line);
          if (!(m > 0.0)) throw FormatError(line, "size multiplier must be positive");
          lex.add_adjective(word, {AttributeKind::Size, {}, m});
        } else {
          throw FormatError(line, "unknown adjective kind '" + f[2] + "'");
        }
      } else if (cat == "preposition") {
        need(3);
        auto kind = constraint_from_string(f[2]);
        if (!kind) throw FormatError(line, "unknown constraint kind '" + f[2] + "'");
        lex.add_preposition(word, *kind);
      } else if (cat == "modifier") {
        need(3);
        const double m = parse_number(f[2], line);
        if (!(m > 0.0)) throw FormatError(line, "speed multiplier must be positive");
        lex.add_modifier(word, m);
      } else if (cat == "filler") {
        for (std::size_t i = 1; i < f.size(); ++i) {
          if (!is_lower_word(f[i])) throw FormatError(line, "word '" + f[i] + "' must be lowercase letters");
          lex.add_filler(f[i]);
        }
      } else {
        throw FormatError(line, "unknown category '" + cat + "'");
      }
    } catch (const FormatError&) {
      throw;
    } catch (const Error& e) {
      throw FormatError(line, e.what());
    }
  }
  return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open lexicon " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void Lexicon::claim(const std::string& word) {
  if (word == "and") throw Error("'and' is reserved");
  if (contains(word)) throw Error("word '" + word + "' already in lexicon");
}

void Lexicon::add_noun(std::string word, NounEntry e) {
  claim(word);
  nouns_.emplace(std::move(word), e);
}
void Lexicon::add_verb(std::string word, VerbEntry e) {
  claim(word);
  verbs_.emplace(std::move(word), e);
}
void Lexicon::add_adjective(std::string word, AdjectiveEntry e) {
  claim(word);
  adjectives_.emplace(std::move(word), e);
}
void Lexicon::add_preposition(std::string word, ConstraintKind k) {
  claim(word);
  prepositions_.emplace(std::move(word), k);
}
void Lexicon::add_modifier(std::string word, double multiplier) {
  claim(word);
  modifiers_.emplace(std::move(word), multiplier);
}
void Lexicon::add_filler(std::string word) {
  claim(word);
  fillers_.insert(std::move(word));
}

std::optional<WordCategory> Lexicon::category(std::string_view w) const {
  if (w == "and") return WordCategory::Conjunction;
  if (nouns_.contains(w)) return WordCategory::Noun;
  if (verbs_.contains(w)) return WordCategory::Verb;
  if (adjectives_.contains(w)) return WordCategory::Adjective;
  if (prepositions_.contains(w)) return WordCategory::Preposition;
  if (modifiers_.contains(w)) return WordCategory::Modifier;
  if (fillers_.contains(w)) return WordCategory::Filler;
  return std::nullopt;
}

namespace {
template <typename Map>
const auto& find_or_throw(const Map& m, std::string_view w, const char* what) {
  auto it = m.find(w);
  if (it == m.end()) throw Error(std::string("'") + std::string(w) + "' is not a " + what);
  return it->second;
}
}  // namespace

const NounEntry& Lexicon::noun(std::string_view w) const { return find_or_throw(nouns_, w, "noun"); }
const VerbEntry& Lexicon::verb(std::string_view w) const { return find_or_throw(verbs_, w, "verb"); }
const AdjectiveEntry& Lexicon::adjective(std::string_view w) const {
  return find_or_throw(adjectives_, w, "adjective");
}
ConstraintKind Lexicon::preposition(std::string_view w) const {
  return find_or_throw(prepositions_, w, "preposition");
}
double Lexicon::modifier(std::string_view w) const { return find_or_throw(modifiers_, w, "modifier"); }

std::size_t Lexicon::size() const {
  return nouns_.size() + verbs_.size() + adjectives_.size() + prepositions_.size() + modifiers_.size() +
         fillers_.size();
}

}  // namespace movai
