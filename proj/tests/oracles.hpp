#pragma once

// Reference semantics written directly from the rule definitions, without
// touching the library's rule code. Tests compare the library against these.

#include <algorithm>
#include <array>
#include <set>
#include <vector>

#include "raven/grammar.hpp"
#include "raven/rules.hpp"

namespace oracle {

using raven::Attribute;
using raven::AttributeDomain;
using raven::RuleSpec;
using raven::RuleType;

inline std::set<int> slots_of(int mask) {
  std::set<int> s;
  for (int i = 0; i < 16; ++i)
    if (mask & (1 << i)) s.insert(i);
  return s;
}

inline int mask_of(const std::set<int>& s) {
  int m = 0;
  for (int i : s) m |= 1 << i;
  return m;
}

inline bool in_domain(const AttributeDomain& d, int v) {
  return std::find(d.values.begin(), d.values.end(), v) != d.values.end();
}

/// Each occupied slot moves `delta` places, wrapping around the layout.
inline int shift_slots(int mask, int delta, int slot_count) {
  std::set<int> out;
  for (int s : slots_of(mask)) out.insert(((s + delta) % slot_count + slot_count) % slot_count);
  return mask_of(out);
}

inline bool row_ok(const RuleSpec& r, const AttributeDomain& d, const std::array<int, 3>& row) {
  for (int v : row)
    if (!in_domain(d, v)) return false;
  const bool pos = d.attribute == Attribute::Position;
  switch (r.type) {
    case RuleType::Constant:
      return row[0] == row[1] && row[1] == row[2];
    case RuleType::Progression:
      if (pos) return shift_slots(row[0], r.delta, d.slot_count) == row[1] &&
                      shift_slots(row[1], r.delta, d.slot_count) == row[2];
      return row[1] - row[0] == r.delta && row[2] - row[1] == r.delta;
    case RuleType::Arithmetic: {
      const bool plus = r.sign == raven::ArithmeticSign::Plus;
      if (pos) {
        const auto a = slots_of(row[0]), b = slots_of(row[1]);
        std::set<int> c;
        if (plus)
          std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::inserter(c, c.end()));
        else
          std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(c, c.end()));
        return mask_of(c) == row[2];
      }
      return row[2] == (plus ? row[0] + row[1] : row[0] - row[1]);
    }
    case RuleType::DistributeThree: {
      auto t = r.triple;
      auto w = row;
      std::sort(t.begin(), t.end());
      std::sort(w.begin(), w.end());
      return t[0] != t[1] && t[1] != t[2] && t == w;
    }
  }
  return false;
}

/// Every in-domain row the rule accepts, by brute force over domain^3.
inline std::vector<std::array<int, 3>> accepted_rows(const RuleSpec& r, const AttributeDomain& d) {
  std::vector<std::array<int, 3>> out;
  for (int a : d.values)
    for (int b : d.values)
      for (int c : d.values)
        if (row_ok(r, d, {a, b, c})) out.push_back({a, b, c});
  return out;
}

/// First values of accepted rows, ascending.
inline std::vector<int> start_values(const RuleSpec& r, const AttributeDomain& d) {
  std::set<int> s;
  for (const auto& row : accepted_rows(r, d)) s.insert(row[0]);
  return {s.begin(), s.end()};
}

/// A small AttributeDomain for non-Position attributes: values 0..n-1 (or lo..hi).
inline AttributeDomain range_domain(Attribute a, int lo, int hi) {
  AttributeDomain d{a, {}, 0};
  for (int v = lo; v <= hi; ++v) d.values.push_back(v);
  return d;
}

/// All rule instantiations for `attribute`, with DistributeThree expanded over
/// every distinct triple of `d` (canonical order) and the first Latin square.
inline std::vector<RuleSpec> all_rules(Attribute attribute, const AttributeDomain& d) {
  std::vector<RuleSpec> out;
  for (const RuleSpec& r : raven::enumerate_instantiations(attribute)) {
    if (r.type != RuleType::DistributeThree) {
      out.push_back(r);
      continue;
    }
    const auto& v = d.values;
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = i + 1; j < v.size(); ++j)
        for (std::size_t k = j + 1; k < v.size(); ++k)
          out.push_back(RuleSpec::distribute_three(attribute, {v[i], v[j], v[k]}, raven::all_latin_squares()[0]));
  }
  return out;
}

/// Connected regions of pixels != background, 4-connectivity.
template <typename Image>
int connected_regions(const Image& img, std::uint8_t background = 255) {
  std::vector<char> seen(img.pixels.size(), 0);
  int regions = 0;
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y * img.width + x);
      if (seen[i] || img.pixels[i] == background) continue;
      ++regions;
      stack.push_back({x, y});
      seen[i] = 1;
      while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        const int dx[] = {1, -1, 0, 0}, dy[] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          const int nx = cx + dx[k], ny = cy + dy[k];
          if (nx < 0 || ny < 0 || nx >= img.width || ny >= img.height) continue;
          const std::size_t j = static_cast<std::size_t>(ny * img.width + nx);
          if (seen[j] || img.pixels[j] == background) continue;
          seen[j] = 1;
          stack.push_back({nx, ny});
        }
      }
    }
  return regions;
}

}  // namespace oracle
