#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "raven/errors.hpp"

namespace raven {

// Grammar levels: Scene -> Structure -> Component -> Layout -> Entity.

enum class Configuration : std::uint8_t {
  Center,
  Grid2x2,
  Grid3x3,
  LeftRight,
  UpDown,
  OutInCenter,
  OutInGrid,
};

enum class Structure : std::uint8_t { Singleton, LeftRight, UpDown, OutIn };

enum class ComponentKind : std::uint8_t { Main, Left, Right, Up, Down, Out, In };

enum class LayoutKind : std::uint8_t {
  SingleCenter,
  SingleLeft,
  SingleRight,
  SingleUp,
  SingleDown,
  SingleOut,
  SingleInCenter,
  Grid2x2,
  Grid3x3,
};

enum class Attribute : std::uint8_t {
  Number,
  Position,
  Type,
  Size,
  Color,
  Uniformity,
  Orientation,
};

inline constexpr std::size_t kConfigurationCount = 7;
inline constexpr std::size_t kStructureCount = 4;
inline constexpr std::size_t kComponentKindCount = 7;
inline constexpr std::size_t kLayoutKindCount = 9;
/// Attributes that can carry a rule (Number, Position, Type, Size, Color).
inline constexpr std::size_t kRuleAttributeCount = 5;

inline constexpr std::array<Configuration, kConfigurationCount> kAllConfigurations = {
    Configuration::Center,      Configuration::Grid2x2,     Configuration::Grid3x3,
    Configuration::LeftRight,   Configuration::UpDown,      Configuration::OutInCenter,
    Configuration::OutInGrid,
};

/// Axis-aligned rectangle in normalized panel coordinates ([0,1]², y down).
struct Rect {
  double x = 0, y = 0, w = 0, h = 0;

  bool operator==(const Rect&) const = default;
  bool contains(const Rect& other) const;
  bool strictly_contains(const Rect& other) const;
  bool overlaps(const Rect& other) const;
};

struct ComponentSpec {
  ComponentKind kind;
  LayoutKind layout;
  std::vector<Rect> slots;  // row-major

  int max_entities() const { return static_cast<int>(slots.size()); }
};

struct ConfigurationSpec {
  Configuration config;
  Structure structure;
  std::vector<ComponentSpec> components;  // OutIn: outside first, then inside
};

const ConfigurationSpec& configuration_spec(Configuration config);

using PositionMask = std::uint16_t;

/// Ordered finite value table for one attribute of one component.
///
/// Values are stored as integer codes: Number holds the entity count,
/// Position holds a slot bitmask, Uniformity holds 0/1 and every other
/// attribute holds an index into its value table (kTypeNames, kSizeValues,
/// kColorValues, kOrientationValues).
struct AttributeDomain {
  Attribute attribute;
  std::vector<int> values;
  int slot_count = 0;  // layout slot count; meaningful for Number/Position

  bool contains(int value) const;
  /// Position of `value` in `values`, or -1.
  int index_of(int value) const;
  std::size_t size() const { return values.size(); }

  bool operator==(const AttributeDomain&) const = default;
};

/// Throws DomainError when the component index or attribute is invalid.
/// Tables are built once and shared.
const AttributeDomain& attribute_domain(Configuration config, int component_index, Attribute attribute);

/// Non-empty subsets of `slot_count` slots ordered by (cardinality, lexicographic slot indices).
std::vector<PositionMask> enumerate_positions(int slot_count);

// Value tables.
inline constexpr std::array<std::string_view, 5> kTypeNames = {"triangle", "square", "pentagon",
                                                               "hexagon", "circle"};
inline constexpr std::array<double, 6> kSizeValues = {0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
inline constexpr std::array<int, 10> kColorValues = {255, 224, 196, 168, 140, 112, 84, 56, 28, 0};
inline constexpr std::array<int, 8> kOrientationValues = {-135, -90, -45, 0, 45, 90, 135, 180};

/// Side count for a Type index; 0 means circle.
int type_sides(int type_index);

struct Entity {
  int slot = 0;
  int type = 0;
  int size = 0;
  int color = 0;
  int angle = 0;  // index into kOrientationValues

  bool operator==(const Entity&) const = default;
};

/// One layout instance. Number and Position are derived from the occupied
/// slots, so |position| == number always holds.
struct ComponentState {
  bool uniform = true;
  std::vector<Entity> entities;  // sorted by slot, slots unique

  int number() const { return static_cast<int>(entities.size()); }
  PositionMask position() const;
  /// Attribute value code for a rule attribute. Entity attributes read the
  /// first entity, which is the shared value when the component is uniform.
  int value(Attribute attribute) const;

  bool operator==(const ComponentState&) const = default;
};

/// A fully instantiated grammar sentence for one panel.
struct PanelState {
  Configuration config = Configuration::Center;
  std::vector<ComponentState> components;

  bool operator==(const PanelState&) const = default;
};

/// Throws DomainError describing the first violated invariant.
void validate_panel(const PanelState& panel);

std::string_view to_string(Configuration c);
std::string_view to_string(Structure s);
std::string_view to_string(ComponentKind k);
std::string_view to_string(LayoutKind k);
std::string_view to_string(Attribute a);
/// Short column label used in accuracy tables (Center, 2x2Grid, ..., O-IG).
std::string_view table_label(Configuration c);

/// Accepts canonical names plus the common aliases (2x2Grid, Left-Right, L-R, O-IC, ...).
Configuration parse_configuration(std::string_view text);
Attribute parse_attribute(std::string_view text);

bool is_rule_attribute(Attribute a);
int component_count(Configuration config);

}  // namespace raven
