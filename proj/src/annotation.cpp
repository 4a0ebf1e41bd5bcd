#include "raven/annotation.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

namespace raven {

namespace {

constexpr std::array<std::string_view, 6> kSizeTokens = {"0.4", "0.5", "0.6", "0.7", "0.8", "0.9"};

std::string leaf(std::string_view key, std::string_view value) {
  return std::string(key) + ":" + std::string(value);
}

std::string type_token(int i) { return leaf("Type", kTypeNames.at(static_cast<std::size_t>(i))); }
std::string size_token(int i) { return leaf("Size", kSizeTokens.at(static_cast<std::size_t>(i))); }
std::string color_token(int i) {
  return leaf("Color", std::to_string(kColorValues.at(static_cast<std::size_t>(i))));
}
std::string angle_token(int i) {
  return leaf("Angle", std::to_string(kOrientationValues.at(static_cast<std::size_t>(i))));
}

void write_node(const TreeNode& node, std::string& out) {
  if (!out.empty()) out += ' ';
  out += node.label;
  for (const auto& child : node.children) write_node(child, out);
  out += ' ';
  out += kEndOfBranch;
}

struct TokenStream {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
};

TreeNode read_node(TokenStream& ts) {
  if (ts.pos >= ts.tokens.size()) throw ParseError("unbalanced tree: missing '/'", ts.pos);
  if (ts.tokens[ts.pos] == kEndOfBranch) throw ParseError("'/' where a node label was expected", ts.pos);
  TreeNode node{std::string(ts.tokens[ts.pos]), {}, ts.pos};
  ++ts.pos;
  while (true) {
    if (ts.pos >= ts.tokens.size()) throw ParseError("unbalanced tree: missing '/'", ts.pos);
    if (ts.tokens[ts.pos] == kEndOfBranch) {
      ++ts.pos;
      return node;
    }
    node.children.push_back(read_node(ts));
  }
}

template <typename Fn>
int lookup(const TreeNode& node, std::size_t count, Fn&& token_of, const char* what) {
  for (std::size_t i = 0; i < count; ++i)
    if (node.label == token_of(static_cast<int>(i))) return static_cast<int>(i);
  throw ParseError(std::string("unknown ") + what + " token '" + node.label + "'", node.token_position);
}

template <typename Enum, std::size_t N>
Enum lookup_enum(const TreeNode& node, const char* what) {
  for (std::size_t i = 0; i < N; ++i)
    if (node.label == to_string(static_cast<Enum>(i))) return static_cast<Enum>(i);
  throw ParseError(std::string("unknown ") + what + " token '" + node.label + "'", node.token_position);
}

int prefixed_int(const TreeNode& node, std::string_view prefix) {
  const std::string_view label = node.label;
  int value = 0;
  if (label.substr(0, prefix.size()) == prefix) {
    const auto digits = label.substr(prefix.size());
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && !digits.empty()) return value;
  }
  throw ParseError("expected '" + std::string(prefix) + "<n>' but found '" + node.label + "'",
                   node.token_position);
}

void expect_leaf(const TreeNode& node) {
  if (!node.children.empty())
    throw ParseError("attribute '" + node.label + "' must be a leaf", node.token_position);
}

}  // namespace

std::string serialize(const TreeNode& tree) {
  std::string out;
  write_node(tree, out);
  return out;
}

TreeNode parse_tree_nodes(std::string_view text) {
  TokenStream ts;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) ts.tokens.push_back(text.substr(i, j - i));
    i = j;
  }
  if (ts.tokens.empty()) throw ParseError("empty tree", 0);
  TreeNode root = read_node(ts);
  if (ts.pos != ts.tokens.size()) throw ParseError("trailing tokens after the root", ts.pos);
  return root;
}

TreeNode panel_tree(const PanelState& panel) {
  const auto& spec = configuration_spec(panel.config);
  TreeNode structure{std::string(to_string(spec.structure)), {}};
  for (std::size_t c = 0; c < spec.components.size(); ++c) {
    const ComponentState& comp = panel.components.at(c);
    TreeNode layout{std::string(to_string(spec.components[c].layout)), {}};
    layout.children.push_back({leaf("Number", std::to_string(comp.number())), {}});
    layout.children.push_back({leaf("Uniformity", comp.uniform ? "true" : "false"), {}});
    for (const Entity& e : comp.entities) {
      layout.children.push_back({leaf("Entity", std::to_string(e.slot)),
                                 {{type_token(e.type), {}},
                                  {size_token(e.size), {}},
                                  {color_token(e.color), {}},
                                  {angle_token(e.angle), {}}}});
    }
    structure.children.push_back(
        {std::string(to_string(spec.components[c].kind)), {std::move(layout)}});
  }
  return TreeNode{"Scene", {std::move(structure)}};
}

PanelState tree_panel(const TreeNode& root) {
  if (root.label != "Scene") throw ParseError("root must be 'Scene'", root.token_position);
  if (root.children.size() != 1)
    throw ParseError("Scene must have exactly one structure", root.token_position);
  const TreeNode& structure_node = root.children.front();
  const auto structure = lookup_enum<Structure, kStructureCount>(structure_node, "structure");

  std::vector<std::pair<ComponentKind, LayoutKind>> shape;
  for (const TreeNode& comp : structure_node.children) {
    const auto kind = lookup_enum<ComponentKind, kComponentKindCount>(comp, "component");
    if (comp.children.size() != 1)
      throw ParseError("component must have exactly one layout", comp.token_position);
    shape.emplace_back(kind, lookup_enum<LayoutKind, kLayoutKindCount>(comp.children.front(), "layout"));
  }

  const Configuration* match = nullptr;
  for (const Configuration& c : kAllConfigurations) {
    const auto& spec = configuration_spec(c);
    if (spec.structure != structure || spec.components.size() != shape.size()) continue;
    bool same = true;
    for (std::size_t i = 0; i < shape.size(); ++i)
      same = same && spec.components[i].kind == shape[i].first &&
             spec.components[i].layout == shape[i].second;
    if (same) match = &c;
  }
  if (!match) throw ParseError("structure matches no figure configuration", structure_node.token_position);

  PanelState panel{*match, {}};
  for (const TreeNode& comp_node : structure_node.children) {
    const TreeNode& layout = comp_node.children.front();
    if (layout.children.size() < 2)
      throw ParseError("layout needs Number and Uniformity", layout.token_position);
    expect_leaf(layout.children[0]);
    expect_leaf(layout.children[1]);
    const int number = prefixed_int(layout.children[0], "Number:");
    ComponentState comp;
    if (layout.children[1].label == "Uniformity:true")
      comp.uniform = true;
    else if (layout.children[1].label == "Uniformity:false")
      comp.uniform = false;
    else
      throw ParseError("unknown uniformity token '" + layout.children[1].label + "'",
                       layout.children[1].token_position);

    for (std::size_t i = 2; i < layout.children.size(); ++i) {
      const TreeNode& en = layout.children[i];
      Entity e;
      e.slot = prefixed_int(en, "Entity:");
      if (en.children.size() != 4)
        throw ParseError("entity needs Type, Size, Color and Angle", en.token_position);
      for (const auto& a : en.children) expect_leaf(a);
      e.type = lookup(en.children[0], kTypeNames.size(), type_token, "type");
      e.size = lookup(en.children[1], kSizeTokens.size(), size_token, "size");
      e.color = lookup(en.children[2], kColorValues.size(), color_token, "color");
      e.angle = lookup(en.children[3], kOrientationValues.size(), angle_token, "angle");
      comp.entities.push_back(e);
    }
    if (comp.number() != number)
      throw ParseError("Number disagrees with the entity count", layout.children[0].token_position);
    panel.components.push_back(std::move(comp));
  }
  try {
    validate_panel(panel);
  } catch (const DomainError& e) {
    throw ParseError(std::string("invalid panel: ") + e.what(), root.token_position);
  }
  return panel;
}

std::string serialize_tree(const PanelState& panel) { return serialize(panel_tree(panel)); }

PanelState parse_tree(std::string_view text) { return tree_panel(parse_tree_nodes(text)); }

const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> vocab = [] {
    std::vector<std::string> v{"Scene"};
    for (std::size_t i = 0; i < kStructureCount; ++i)
      v.emplace_back(to_string(static_cast<Structure>(i)));
    for (std::size_t i = 0; i < kComponentKindCount; ++i)
      v.emplace_back(to_string(static_cast<ComponentKind>(i)));
    for (std::size_t i = 0; i < kLayoutKindCount; ++i)
      v.emplace_back(to_string(static_cast<LayoutKind>(i)));
    for (int n = 1; n <= 9; ++n) v.push_back(leaf("Number", std::to_string(n)));
    v.push_back("Uniformity:false");
    v.push_back("Uniformity:true");
    for (int s = 0; s < 9; ++s) v.push_back(leaf("Entity", std::to_string(s)));
    for (std::size_t i = 0; i < kTypeNames.size(); ++i) v.push_back(type_token(static_cast<int>(i)));
    for (std::size_t i = 0; i < kSizeTokens.size(); ++i) v.push_back(size_token(static_cast<int>(i)));
    for (std::size_t i = 0; i < kColorValues.size(); ++i) v.push_back(color_token(static_cast<int>(i)));
    for (std::size_t i = 0; i < kOrientationValues.size(); ++i)
      v.push_back(angle_token(static_cast<int>(i)));
    v.emplace_back(kEndOfBranch);
    return v;
  }();
  return vocab;
}

std::vector<std::string> rule_annotations(const RuleGroup& group) {
  std::vector<std::string> out;
  for (const RuleSpec& r : group.slots)
    out.push_back("[" + std::string(to_string(r.target)) + ":" + std::string(to_string(r.type)) + "]");
  return out;
}

std::vector<std::uint8_t> rule_target_vector(const Problem& problem) {
  std::vector<std::uint8_t> v(kRuleTargetLength, 0);
  for (const RuleGroup& g : problem.rule_groups)
    for (const RuleSpec& r : g.slots)
      v[static_cast<std::size_t>(r.target) * kRuleTypeCount + static_cast<std::size_t>(r.type)] = 1;
  return v;
}

const std::vector<std::string>& struct_target_labels() {
  static const std::vector<std::string> labels = [] {
    std::vector<std::string> l;
    for (std::size_t i = 0; i < kStructureCount; ++i) l.emplace_back(to_string(static_cast<Structure>(i)));
    for (std::size_t i = 1; i < kComponentKindCount; ++i)
      l.emplace_back(to_string(static_cast<ComponentKind>(i)));
    for (std::size_t i = 0; i < kLayoutKindCount; ++i) l.emplace_back(to_string(static_cast<LayoutKind>(i)));
    return l;
  }();
  return labels;
}

std::vector<std::uint8_t> struct_target_vector(Configuration config) {
  const auto& spec = configuration_spec(config);
  std::vector<std::uint8_t> v(kStructTargetLength, 0);
  v[static_cast<std::size_t>(spec.structure)] = 1;
  for (const auto& comp : spec.components) {
    if (comp.kind != ComponentKind::Main)
      v[kStructureCount + static_cast<std::size_t>(comp.kind) - 1] = 1;
    v[kStructureCount + kComponentKindCount - 1 + static_cast<std::size_t>(comp.layout)] = 1;
  }
  return v;
}

}  // namespace raven
