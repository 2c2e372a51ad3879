#include "movai/scene_graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "movai/error.hpp"

namespace movai {

using ojson = nlohmann::ordered_json;

std::string_view to_string(Role r) { return r == Role::Actor ? "actor" : "ground"; }

const Entity* SceneGraph::find(int id) const {
  for (const auto& e : objects)
    if (e.id == id) return &e;
  return nullptr;
}

const TemporalAnnotation* SceneGraph::annotation_for(int id) const {
  for (const auto& a : annotations)
    if (a.entity == id) return &a;
  return nullptr;
}

void validate(const SceneGraph& g) {
  auto fail = [](const std::string& why) { throw FormatError(0, why); };
  if (g.objects.empty()) fail("graph has no objects");
  std::set<int> ids;
  for (const auto& e : g.objects) {
    if (e.id < 0) fail("negative entity id");
    if (!ids.insert(e.id).second) fail("duplicate entity id " + std::to_string(e.id));
    if (e.cls.empty()) fail("entity " + std::to_string(e.id) + " has no class");
    if (!(e.size > 0.0) || !std::isfinite(e.size)) fail("entity " + std::to_string(e.id) + " has invalid size");
  }
  for (const auto& r : g.relations) {
    if (!ids.contains(r.subject) || !ids.contains(r.object)) fail("relation references unknown entity");
    if (r.subject == r.object) fail("relation subject equals object");
  }
  std::set<int> annotated;
  for (const auto& a : g.annotations) {
    if (!ids.contains(a.entity)) fail("annotation references unknown entity " + std::to_string(a.entity));
    if (!annotated.insert(a.entity).second) fail("duplicate annotation for entity " + std::to_string(a.entity));
    if (a.positions.empty()) fail("annotation with zero duration");
    if (a.positions.size() != g.annotations.front().positions.size()) fail("annotation durations differ");
    for (const auto& p : a.positions)
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) fail("non-finite annotation position");
  }
}

namespace {

ojson rgb_json(const Rgb& c) { return ojson::array({c[0], c[1], c[2]}); }

ojson to_json(const Entity& e) {
  ojson j;
  j["id"] = e.id;
  j["class"] = e.cls;
  j["role"] = std::string(to_string(e.role));
  j["shape"] = std::string(to_string(e.shape));
  j["size"] = e.size;
  j["color"] = rgb_json(e.color);
  ojson attrs = ojson::array();
  for (const auto& a : e.attributes) {
    ojson ja;
    ja["word"] = a.word;
    ja["kind"] = std::string(to_string(a.kind));
    if (a.kind == AttributeKind::Color)
      ja["value"] = rgb_json(a.color);
    else
      ja["value"] = a.multiplier;
    attrs.push_back(std::move(ja));
  }
  j["attributes"] = std::move(attrs);
  if (e.action) {
    ojson act;
    act["verb"] = e.action->verb;
    act["trajectory"] = std::string(to_string(e.action->trajectory));
    act["base_speed"] = e.action->base_speed;
    act["multiplier"] = e.action->multiplier;
    act["modifiers"] = e.action->modifiers;
    j["action"] = std::move(act);
  } else {
    j["action"] = nullptr;
  }
  return j;
}

// Structural lookups throw nlohmann type/out_of_range errors that the caller
// converts into FormatError.
template <typename T>
T get(const ojson& j, const char* key) {
  return j.at(key).get<T>();
}

Rgb get_rgb(const ojson& j) {
  if (!j.is_array() || j.size() != 3) throw FormatError(0, "color must be a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

template <typename E>
E get_enum(const ojson& j, const char* key, std::optional<E> (*parse)(std::string_view)) {
  const auto s = get<std::string>(j, key);
  auto v = parse(s);
  if (!v) throw FormatError(0, std::string("invalid ") + key + " '" + s + "'");
  return *v;
}

Entity entity_from_json(const ojson& j) {
  Entity e;
  e.id = get<int>(j, "id");
  e.cls = get<std::string>(j, "class");
  const auto role = get<std::string>(j, "role");
  if (role == "actor")
    e.role = Role::Actor;
  else if (role == "ground")
    e.role = Role::Ground;
  else
    throw FormatError(0, "invalid role '" + role + "'");
  e.shape = get_enum<Shape>(j, "shape", shape_from_string);
  e.size = get<double>(j, "size");
  e.color = get_rgb(j.at("color"));
  for (const auto& ja : j.at("attributes")) {
    Attribute a;
    a.word = get<std::string>(ja, "word");
    a.kind = get_enum<AttributeKind>(ja, "kind", attribute_kind_from_string);
    if (a.kind == AttributeKind::Color)
      a.color = get_rgb(ja.at("value"));
    else
      a.multiplier = get<double>(ja, "value");
    e.attributes.push_back(std::move(a));
  }
  const auto& act = j.at("action");
  if (!act.is_null()) {
    Action a;
    a.verb = get<std::string>(act, "verb");
    a.trajectory = get_enum<Trajectory>(act, "trajectory", trajectory_from_string);
    a.base_speed = get<double>(act, "base_speed");
    a.multiplier = get<double>(act, "multiplier");
    a.modifiers = act.at("modifiers").get<std::vector<std::string>>();
    e.action = std::move(a);
  }
  return e;
}

std::uint64_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::uint64_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

std::string serialize(const SceneGraph& g) {
  validate(g);
  ojson doc;
  doc["prompt"] = g.prompt;
  ojson objs = ojson::array();
  for (const auto& e : g.objects) objs.push_back(to_json(e));
  doc["objects"] = std::move(objs);
  ojson rels = ojson::array();
  for (const auto& r : g.relations) {
    ojson jr;
    jr["subject"] = r.subject;
    jr["predicate"] = r.predicate;
    jr["constraint"] = std::string(to_string(r.constraint));
    jr["object"] = r.object;
    rels.push_back(std::move(jr));
  }
  doc["relations"] = std::move(rels);
  ojson anns = ojson::array();
  for (const auto& a : g.annotations) {
    ojson ja;
    ja["entity"] = a.entity;
    ja["trajectory"] = std::string(to_string(a.trajectory));
    ja["speed"] = a.speed;
    ja["duration"] = a.positions.size();
    ojson pos = ojson::array();
    for (const auto& p : a.positions) pos.push_back(ojson::array({p.x, p.y}));
    ja["positions"] = std::move(pos);
    anns.push_back(std::move(ja));
  }
  doc["annotations"] = std::move(anns);
  return doc.dump(2) + "\n";
}

SceneGraph deserialize(std::string_view text) {
  ojson doc;
  try {
    doc = ojson::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(line_of(text, e.byte == 0 ? 0 : e.byte - 1), "malformed JSON");
  }
  SceneGraph g;
  try {
    if (!doc.is_object()) throw FormatError(1, "top level must be an object");
    g.prompt = get<std::string>(doc, "prompt");
    for (const auto& jo : doc.at("objects")) g.objects.push_back(entity_from_json(jo));
    for (const auto& jr : doc.at("relations")) {
      Relation r;
      r.subject = get<int>(jr, "subject");
      r.predicate = get<std::string>(jr, "predicate");
      r.constraint = get_enum<ConstraintKind>(jr, "constraint", constraint_from_string);
      r.object = get<int>(jr, "object");
      g.relations.push_back(std::move(r));
    }
    for (const auto& ja : doc.at("annotations")) {
      TemporalAnnotation a;
      a.entity = get<int>(ja, "entity");
      a.trajectory = get_enum<Trajectory>(ja, "trajectory", trajectory_from_string);
      a.speed = get<double>(ja, "speed");
      const auto duration = get<std::size_t>(ja, "duration");
      for (const auto& p : ja.at("positions")) {
        if (!p.is_array() || p.size() != 2) throw FormatError(0, "position must be [x, y]");
        a.positions.push_back({p[0].get<double>(), p[1].get<double>()});
      }
      if (a.positions.size() != duration) throw FormatError(0, "positions length differs from duration");
      g.annotations.push_back(std::move(a));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(0, std::string("schema violation: ") + e.what());
  }
  validate(g);
  return g;
}

}  // namespace movai
