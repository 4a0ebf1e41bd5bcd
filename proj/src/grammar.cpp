#include "raven/grammar.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <numeric>

namespace raven {

namespace {

constexpr double kGridMargin = 0.02;
constexpr Rect kFullPanel{0.0, 0.0, 1.0, 1.0};
constexpr Rect kInsideRegion{0.25, 0.25, 0.5, 0.5};

std::vector<Rect> grid_slots(const Rect& region, int n) {
  std::vector<Rect> slots;
  const double cw = region.w / n;
  const double ch = region.h / n;
  const double mx = kGridMargin * region.w;
  const double my = kGridMargin * region.h;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      slots.push_back({region.x + j * cw + mx, region.y + i * ch + my, cw - 2 * mx, ch - 2 * my});
    }
  }
  return slots;
}

std::array<ConfigurationSpec, kConfigurationCount> build_specs() {
  using CK = ComponentKind;
  using LK = LayoutKind;
  return {{
      {Configuration::Center, Structure::Singleton, {{CK::Main, LK::SingleCenter, {kFullPanel}}}},
      {Configuration::Grid2x2, Structure::Singleton,
       {{CK::Main, LK::Grid2x2, grid_slots(kFullPanel, 2)}}},
      {Configuration::Grid3x3, Structure::Singleton,
       {{CK::Main, LK::Grid3x3, grid_slots(kFullPanel, 3)}}},
      {Configuration::LeftRight, Structure::LeftRight,
       {{CK::Left, LK::SingleLeft, {{0.0, 0.0, 0.5, 1.0}}},
        {CK::Right, LK::SingleRight, {{0.5, 0.0, 0.5, 1.0}}}}},
      {Configuration::UpDown, Structure::UpDown,
       {{CK::Up, LK::SingleUp, {{0.0, 0.0, 1.0, 0.5}}},
        {CK::Down, LK::SingleDown, {{0.0, 0.5, 1.0, 0.5}}}}},
      {Configuration::OutInCenter, Structure::OutIn,
       {{CK::Out, LK::SingleOut, {kFullPanel}}, {CK::In, LK::SingleInCenter, {kInsideRegion}}}},
      {Configuration::OutInGrid, Structure::OutIn,
       {{CK::Out, LK::SingleOut, {kFullPanel}},
        {CK::In, LK::Grid2x2, grid_slots(kInsideRegion, 2)}}},
  }};
}

std::vector<int> index_range(int lo, int hi) {
  std::vector<int> v(static_cast<std::size_t>(hi - lo + 1));
  std::iota(v.begin(), v.end(), lo);
  return v;
}

bool is_outside(Configuration config, int component_index) {
  return configuration_spec(config).components[static_cast<std::size_t>(component_index)].kind ==
         ComponentKind::Out;
}

std::string normalize_name(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '-' || c == '_' || c == ' ') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

bool Rect::contains(const Rect& o) const {
  constexpr double eps = 1e-12;
  return o.x >= x - eps && o.y >= y - eps && o.x + o.w <= x + w + eps && o.y + o.h <= y + h + eps;
}

bool Rect::strictly_contains(const Rect& o) const {
  return o.x > x && o.y > y && o.x + o.w < x + w && o.y + o.h < y + h;
}

bool Rect::overlaps(const Rect& o) const {
  constexpr double eps = 1e-12;
  return x < o.x + o.w - eps && o.x < x + w - eps && y < o.y + o.h - eps && o.y < y + h - eps;
}

const ConfigurationSpec& configuration_spec(Configuration config) {
  static const auto specs = build_specs();
  const auto i = static_cast<std::size_t>(config);
  if (i >= specs.size()) throw DomainError("unknown figure configuration");
  return specs[i];
}

int component_count(Configuration config) {
  return static_cast<int>(configuration_spec(config).components.size());
}

std::vector<PositionMask> enumerate_positions(int slot_count) {
  std::vector<PositionMask> masks;
  const unsigned limit = 1u << slot_count;
  for (unsigned m = 1; m < limit; ++m) masks.push_back(static_cast<PositionMask>(m));
  // Lexicographic order over ascending slot lists within each cardinality.
  auto slots_of = [](PositionMask m) {
    std::vector<int> s;
    for (int i = 0; i < 16; ++i)
      if (m & (1u << i)) s.push_back(i);
    return s;
  };
  std::stable_sort(masks.begin(), masks.end(), [&](PositionMask a, PositionMask b) {
    const int ca = std::popcount(a), cb = std::popcount(b);
    if (ca != cb) return ca < cb;
    return slots_of(a) < slots_of(b);
  });
  return masks;
}

bool AttributeDomain::contains(int value) const {
  // Position tables hold every non-empty subset of the layout's slots.
  if (attribute == Attribute::Position) return value > 0 && value < (1 << slot_count);
  return index_of(value) >= 0;
}

int AttributeDomain::index_of(int value) const {
  // Every table except Position is a contiguous ascending range.
  if (values.empty()) return -1;
  if (attribute != Attribute::Position) {
    const int i = value - values.front();
    return (i >= 0 && i < static_cast<int>(values.size())) ? i : -1;
  }
  auto it = std::find(values.begin(), values.end(), value);
  return it == values.end() ? -1 : static_cast<int>(it - values.begin());
}

namespace {

AttributeDomain build_domain(Configuration config, int component_index, Attribute attribute) {
  const auto& spec = configuration_spec(config);
  const int slots = spec.components[static_cast<std::size_t>(component_index)].max_entities();
  const bool outside = is_outside(config, component_index);

  AttributeDomain d{attribute, {}, slots};
  switch (attribute) {
    case Attribute::Number:
      d.values = index_range(1, slots);
      break;
    case Attribute::Position: {
      const auto masks = enumerate_positions(slots);
      d.values.assign(masks.begin(), masks.end());
      break;
    }
    case Attribute::Type:
      d.values = index_range(0, static_cast<int>(kTypeNames.size()) - 1);
      break;
    case Attribute::Size:
      // The outside entity stays large so the inside component fits within it.
      d.values = outside ? index_range(static_cast<int>(kSizeValues.size()) - 2,
                                       static_cast<int>(kSizeValues.size()) - 1)
                         : index_range(0, static_cast<int>(kSizeValues.size()) - 1);
      break;
    case Attribute::Color:
      d.values = outside ? std::vector<int>{0}
                         : index_range(0, static_cast<int>(kColorValues.size()) - 1);
      break;
    case Attribute::Uniformity:
      d.values = {0, 1};
      break;
    case Attribute::Orientation:
      d.values = index_range(0, static_cast<int>(kOrientationValues.size()) - 1);
      break;
    default:
      throw DomainError("unknown attribute");
  }
  return d;
}

}  // namespace

const AttributeDomain& attribute_domain(Configuration config, int component_index,
                                        Attribute attribute) {
  constexpr std::size_t kAttributes = 7;
  using Table = std::array<std::array<std::array<AttributeDomain, kAttributes>, 2>, kConfigurationCount>;
  static const Table table = [] {
    Table t{};
    for (Configuration c : kAllConfigurations)
      for (int comp = 0; comp < component_count(c); ++comp)
        for (std::size_t a = 0; a < kAttributes; ++a)
          t[static_cast<std::size_t>(c)][static_cast<std::size_t>(comp)][a] =
              build_domain(c, comp, static_cast<Attribute>(a));
    return t;
  }();
  (void)configuration_spec(config);
  if (component_index < 0 || component_index >= component_count(config)) {
    throw DomainError("component index " + std::to_string(component_index) + " out of range for " +
                      std::string(to_string(config)));
  }
  const auto a = static_cast<std::size_t>(attribute);
  if (a >= kAttributes) throw DomainError("unknown attribute");
  return table[static_cast<std::size_t>(config)][static_cast<std::size_t>(component_index)][a];
}

int type_sides(int type_index) {
  static constexpr std::array<int, 5> sides = {3, 4, 5, 6, 0};
  if (type_index < 0 || type_index >= static_cast<int>(sides.size()))
    throw DomainError("type index out of range");
  return sides[static_cast<std::size_t>(type_index)];
}

PositionMask ComponentState::position() const {
  PositionMask m = 0;
  for (const auto& e : entities) m = static_cast<PositionMask>(m | (1u << e.slot));
  return m;
}

int ComponentState::value(Attribute attribute) const {
  switch (attribute) {
    case Attribute::Number:
      return number();
    case Attribute::Position:
      return position();
    case Attribute::Uniformity:
      return uniform ? 1 : 0;
    default:
      break;
  }
  if (entities.empty()) throw DomainError("component has no entities");
  const Entity& e = entities.front();
  switch (attribute) {
    case Attribute::Type:
      return e.type;
    case Attribute::Size:
      return e.size;
    case Attribute::Color:
      return e.color;
    case Attribute::Orientation:
      return e.angle;
    default:
      throw DomainError("unknown attribute");
  }
}

void validate_panel(const PanelState& panel) {
  const auto& spec = configuration_spec(panel.config);
  if (panel.components.size() != spec.components.size())
    throw DomainError("component count does not match configuration");
  for (int c = 0; c < static_cast<int>(spec.components.size()); ++c) {
    const auto& comp = panel.components[static_cast<std::size_t>(c)];
    const int slots = spec.components[static_cast<std::size_t>(c)].max_entities();
    if (comp.entities.empty()) throw DomainError("component without entities");
    const auto& types = attribute_domain(panel.config, c, Attribute::Type);
    const auto& sizes = attribute_domain(panel.config, c, Attribute::Size);
    const auto& colors = attribute_domain(panel.config, c, Attribute::Color);
    const auto& angles = attribute_domain(panel.config, c, Attribute::Orientation);
    int prev_slot = -1;
    for (const auto& e : comp.entities) {
      if (e.slot <= prev_slot || e.slot >= slots) throw DomainError("entity slots out of order");
      prev_slot = e.slot;
      if (!types.contains(e.type) || !sizes.contains(e.size) || !colors.contains(e.color) ||
          !angles.contains(e.angle)) {
        throw DomainError("entity attribute outside its domain");
      }
      if (comp.uniform) {
        const auto& f = comp.entities.front();
        if (e.type != f.type || e.size != f.size || e.color != f.color)
          throw DomainError("uniform component with differing entities");
      }
    }
  }
}

std::string_view to_string(Configuration c) {
  static constexpr std::array<std::string_view, kConfigurationCount> n = {
      "Center", "Grid2x2", "Grid3x3", "LeftRight", "UpDown", "OutInCenter", "OutInGrid"};
  return n.at(static_cast<std::size_t>(c));
}

std::string_view table_label(Configuration c) {
  static constexpr std::array<std::string_view, kConfigurationCount> n = {
      "Center", "2x2Grid", "3x3Grid", "L-R", "U-D", "O-IC", "O-IG"};
  return n.at(static_cast<std::size_t>(c));
}

std::string_view to_string(Structure s) {
  static constexpr std::array<std::string_view, kStructureCount> n = {"Singleton", "LeftRight",
                                                                      "UpDown", "OutIn"};
  return n.at(static_cast<std::size_t>(s));
}

std::string_view to_string(ComponentKind k) {
  static constexpr std::array<std::string_view, kComponentKindCount> n = {
      "Main", "Left", "Right", "Up", "Down", "Out", "In"};
  return n.at(static_cast<std::size_t>(k));
}

std::string_view to_string(LayoutKind k) {
  static constexpr std::array<std::string_view, kLayoutKindCount> n = {
      "SingleCenter", "SingleLeft",     "SingleRight", "SingleUp", "SingleDown",
      "SingleOut",    "SingleInCenter", "Grid2x2",     "Grid3x3"};
  return n.at(static_cast<std::size_t>(k));
}

std::string_view to_string(Attribute a) {
  static constexpr std::array<std::string_view, 7> n = {
      "Number", "Position", "Type", "Size", "Color", "Uniformity", "Orientation"};
  return n.at(static_cast<std::size_t>(a));
}

Configuration parse_configuration(std::string_view text) {
  const std::string key = normalize_name(text);
  for (Configuration c : kAllConfigurations) {
    if (key == normalize_name(to_string(c)) || key == normalize_name(table_label(c))) return c;
  }
  if (key == "2x2grid") return Configuration::Grid2x2;
  if (key == "3x3grid") return Configuration::Grid3x3;
  throw DomainError("unknown figure configuration '" + std::string(text) + "'");
}

Attribute parse_attribute(std::string_view text) {
  for (int i = 0; i < 7; ++i) {
    const auto a = static_cast<Attribute>(i);
    if (text == to_string(a)) return a;
  }
  throw DomainError("unknown attribute '" + std::string(text) + "'");
}

bool is_rule_attribute(Attribute a) {
  return a != Attribute::Uniformity && a != Attribute::Orientation;
}

}  // namespace raven
