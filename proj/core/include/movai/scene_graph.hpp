#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "movai/lexicon.hpp"

namespace movai {

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

struct Attribute {
  std::string word;
  AttributeKind kind = AttributeKind::Color;
  Rgb color{};               // kind == Color
  double multiplier = 1.0;   // kind == Size
  bool operator==(const Attribute&) const = default;
};

enum class Role { Actor, Ground };
std::string_view to_string(Role r);

/// The verb attached to a clause actor, with its resolved speed.
struct Action {
  std::string verb;
  Trajectory trajectory = Trajectory::Linear;
  double base_speed = 0.0;
  double multiplier = 1.0;  // product of modifier multipliers
  std::vector<std::string> modifiers;

  double speed() const { return base_speed * multiplier; }
  bool operator==(const Action&) const = default;
};

/// One noun occurrence. Shape, size and color are resolved from the lexicon
/// and the attached adjectives so the graph renders without a lexicon.
struct Entity {
  int id = 0;
  std::string cls;
  Role role = Role::Actor;
  Shape shape = Shape::Circle;
  double size = 0.05;
  Rgb color{};
  std::vector<Attribute> attributes;
  std::optional<Action> action;
  bool operator==(const Entity&) const = default;
};

struct Relation {
  int subject = 0;
  std::string predicate;
  ConstraintKind constraint = ConstraintKind::Near;
  int object = 0;
  bool operator==(const Relation&) const = default;
};

struct TemporalAnnotation {
  int entity = 0;
  Trajectory trajectory = Trajectory::Static;
  double speed = 0.0;
  std::vector<Point> positions;  // one per frame

  std::size_t duration() const { return positions.size(); }
  bool operator==(const TemporalAnnotation&) const = default;
};

struct SceneGraph {
  std::string prompt;
  std::vector<Entity> objects;
  std::vector<Relation> relations;
  std::vector<TemporalAnnotation> annotations;

  const Entity* find(int id) const;
  const TemporalAnnotation* annotation_for(int id) const;
  bool operator==(const SceneGraph&) const = default;
};

/// Checks the structural invariants; throws FormatError(0, reason).
void validate(const SceneGraph& g);

/// JSON document with keys in the order prompt, objects, relations,
/// annotations; two-space indentation and a trailing newline.
std::string serialize(const SceneGraph& g);
/// Throws FormatError(line, reason); line 0 when the problem is structural
/// rather than syntactic.
SceneGraph deserialize(std::string_view text);

}  // namespace movai
