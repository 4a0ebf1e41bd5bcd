#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "raven/forge.hpp"
#include "raven/grammar.hpp"

namespace raven {

/// Generic n-ary labelled tree.
struct TreeNode {
  std::string label;
  std::vector<TreeNode> children;
  std::size_t token_position = 0;  // set by the parser; ignored by ==

  bool operator==(const TreeNode& o) const { return label == o.label && children == o.children; }
};

inline constexpr std::string_view kEndOfBranch = "/";

/// Pre-order labels, each node closed by "/". A(B, C) -> "A B / C / /".
std::string serialize(const TreeNode& tree);

/// Inverse of serialize. Throws ParseError (with token position) on unbalanced input.
TreeNode parse_tree_nodes(std::string_view text);

/// Scene -> Structure -> Component -> Layout -> {Number, Uniformity, Entity -> {Type, Size, Color, Angle}}.
TreeNode panel_tree(const PanelState& panel);
/// Throws ParseError on unknown labels or trees that do not describe a valid panel.
PanelState tree_panel(const TreeNode& tree);

std::string serialize_tree(const PanelState& panel);
PanelState parse_tree(std::string_view text);

/// Every token serialize_tree can emit, including "/".
const std::vector<std::string>& vocabulary();

/// [attribute:rule] annotation strings for one component, e.g. "[Color:Progression]".
std::vector<std::string> rule_annotations(const RuleGroup& group);

/// 5 rule attributes x 4 rule types, OR-ed over components. Index = attribute * 4 + rule type.
inline constexpr std::size_t kRuleTargetLength = kRuleAttributeCount * 4;
std::vector<std::uint8_t> rule_target_vector(const Problem& problem);

/// Structure kinds, then Left/Right/Up/Down/Out/In component kinds, then layout kinds.
/// The single component of a Singleton structure has no bit of its own.
inline constexpr std::size_t kStructTargetLength = kStructureCount + 6 + kLayoutKindCount;
std::vector<std::uint8_t> struct_target_vector(Configuration config);
inline std::vector<std::uint8_t> struct_target_vector(const Problem& problem) {
  return struct_target_vector(problem.config);
}
/// Label of each struct-target bit.
const std::vector<std::string>& struct_target_labels();

}  // namespace raven
