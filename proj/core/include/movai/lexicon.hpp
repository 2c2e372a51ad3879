#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace movai {

using Rgb = std::array<double, 3>;

enum class Shape { Circle, Rect };
enum class Trajectory { Static, Linear, Fall, Spin };
enum class AttributeKind { Color, Size };
enum class ConstraintKind { On, Under, LeftOf, RightOf, Across, In, Near };

std::string_view to_string(Shape s);
std::string_view to_string(Trajectory t);
std::string_view to_string(AttributeKind k);
std::string_view to_string(ConstraintKind k);
std::optional<Shape> shape_from_string(std::string_view s);
std::optional<Trajectory> trajectory_from_string(std::string_view s);
std::optional<AttributeKind> attribute_kind_from_string(std::string_view s);
std::optional<ConstraintKind> constraint_from_string(std::string_view s);

struct NounEntry {
  Shape shape = Shape::Circle;
  double size = 0.05;  // radius or half-extent, scene units
  Rgb color{0.8, 0.8, 0.8};
};

struct VerbEntry {
  Trajectory trajectory = Trajectory::Linear;
  double speed = 0.01;  // scene units per frame
};

struct AdjectiveEntry {
  AttributeKind kind = AttributeKind::Color;
  Rgb color{};
  double size_multiplier = 1.0;
};

enum class WordCategory { Noun, Verb, Adjective, Preposition, Modifier, Filler, Conjunction };

/// Closed vocabulary for the scene grammar. Words are lowercase and belong to
/// exactly one category; "and" is reserved as the clause conjunction.
class Lexicon {
 public:
  /// Text format, one entry per line, '#' starts a comment:
  ///   noun <word> circle|rect <size> <r> <g> <b>
  ///   verb <word> linear|fall|spin <speed>
  ///   adjective <word> color <r> <g> <b>  |  adjective <word> size <multiplier>
  ///   preposition <word> on|under|left_of|right_of|across|in|near
  ///   modifier <word> <speed multiplier>
  ///   filler <word>...
  static Lexicon parse(std::string_view text);
  static Lexicon load(const std::filesystem::path& path);

  void add_noun(std::string word, NounEntry e);
  void add_verb(std::string word, VerbEntry e);
  void add_adjective(std::string word, AdjectiveEntry e);
  void add_preposition(std::string word, ConstraintKind k);
  void add_modifier(std::string word, double multiplier);
  void add_filler(std::string word);

  std::optional<WordCategory> category(std::string_view word) const;
  bool contains(std::string_view word) const { return category(word).has_value(); }

  const NounEntry& noun(std::string_view w) const;
  const VerbEntry& verb(std::string_view w) const;
  const AdjectiveEntry& adjective(std::string_view w) const;
  ConstraintKind preposition(std::string_view w) const;
  double modifier(std::string_view w) const;

  std::size_t size() const;

 private:
  void claim(const std::string& word);

  std::map<std::string, NounEntry, std::less<>> nouns_;
  std::map<std::string, VerbEntry, std::less<>> verbs_;
  std::map<std::string, AdjectiveEntry, std::less<>> adjectives_;
  std::map<std::string, ConstraintKind, std::less<>> prepositions_;
  std::map<std::string, double, std::less<>> modifiers_;
  std::set<std::string, std::less<>> fillers_;
};

}  // namespace movai
