#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "raven/forge.hpp"
#include "raven/grammar.hpp"

namespace raven {

inline constexpr int kPanelSize = 160;
inline constexpr std::uint8_t kBackground = 255;
inline constexpr std::uint8_t kInk = 0;

/// 8-bit grayscale, row-major.
struct PanelImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  PanelImage() = default;
  PanelImage(int w, int h, std::uint8_t fill = kBackground)
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

  std::uint8_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
  }
  std::uint8_t& at(int x, int y) {
    return pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
  }

  bool operator==(const PanelImage&) const = default;
};

/// Pixel rectangle [x0, x1) x [y0, y1).
struct PixelRect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
};

/// Slot rectangle of a layout mapped onto a `size` x `size` panel.
PixelRect slot_pixels(const Rect& slot, int size = kPanelSize);

/// One outlined, filled shape per entity, clipped to its slot; no anti-aliasing.
PanelImage render_panel(const PanelState& panel, int size = kPanelSize);

/// Composite preview: the 3x3 matrix with "?" in the last cell above a
/// labelled 2x4 candidate strip.
PanelImage render_sheet(const Problem& problem);

/// Top-left pixel of panel k on the sheet: k in 0..7 context (row-major), 8..15 candidates.
std::pair<int, int> sheet_panel_origin(int k);
/// Top-left pixel of the "?" cell.
std::pair<int, int> sheet_question_origin();
int sheet_width();
int sheet_height();

/// All 16 panels: context 0..7, then candidates.
std::vector<PanelImage> render_problem_panels(const Problem& problem);

/// Non-interlaced 8-bit grayscale PNG.
std::vector<std::uint8_t> encode_png(const PanelImage& image);
PanelImage decode_png(std::span<const std::uint8_t> bytes);
void write_png(const PanelImage& image, const std::filesystem::path& path);

}  // namespace raven
