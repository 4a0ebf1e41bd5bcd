#include "raven/render.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

namespace raven {

namespace {

constexpr double kStroke = 2.0;

// Sheet geometry.
constexpr int kGap = 8;
constexpr int kLabelBand = 24;
constexpr int kStripColumns = 4;
constexpr int kSheetWidth = kStripColumns * kPanelSize + (kStripColumns + 1) * kGap;
constexpr int kMatrixSide = 3 * kPanelSize + 2 * kGap;
constexpr int kMatrixX = (kSheetWidth - kMatrixSide) / 2;
constexpr int kMatrixY = kGap;
constexpr int kSeparatorY = kMatrixY + kMatrixSide + kGap;
constexpr int kStripY = kSeparatorY + 2 * kGap;
constexpr int kSheetHeight = kStripY + 2 * (kPanelSize + kLabelBand);

struct Point {
  double x, y;
};

// 5x7 bitmap glyphs, one row per byte, bit 4 = leftmost column.
using Glyph = std::array<std::uint8_t, 7>;
constexpr std::array<Glyph, 10> kDigits = {{
    {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E},
    {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E},
    {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F},
    {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E},
    {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02},
    {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E},
    {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E},
    {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08},
    {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E},
    {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C},
}};
constexpr Glyph kQuestion = {0x0E, 0x11, 0x01, 0x02, 0x04, 0x00, 0x04};

void draw_glyph(PanelImage& img, const Glyph& g, int x, int y, int scale) {
  for (int r = 0; r < 7; ++r)
    for (int c = 0; c < 5; ++c)
      if (g[static_cast<std::size_t>(r)] & (0x10 >> c))
        for (int dy = 0; dy < scale; ++dy)
          for (int dx = 0; dx < scale; ++dx) img.at(x + c * scale + dx, y + r * scale + dy) = kInk;
}

void fill_rect(PanelImage& img, int x0, int y0, int x1, int y1, std::uint8_t v) {
  for (int y = std::max(0, y0); y < std::min(img.height, y1); ++y)
    for (int x = std::max(0, x0); x < std::min(img.width, x1); ++x) img.at(x, y) = v;
}

void frame(PanelImage& img, int x, int y, int w, int h) {
  fill_rect(img, x - 1, y - 1, x + w + 1, y, kInk);
  fill_rect(img, x - 1, y + h, x + w + 1, y + h + 1, kInk);
  fill_rect(img, x - 1, y, x, y + h, kInk);
  fill_rect(img, x + w, y, x + w + 1, y + h, kInk);
}

/// Even-odd scanline fill sampling pixel centres, clipped to `clip`.
void fill_polygon(PanelImage& img, const PixelRect& clip, std::span<const Point> poly, std::uint8_t v) {
  double ymin = poly[0].y, ymax = poly[0].y;
  for (const auto& p : poly) {
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const int ya = std::max(clip.y0, static_cast<int>(std::floor(ymin)));
  const int yb = std::min(clip.y1 - 1, static_cast<int>(std::ceil(ymax)));
  std::vector<double> xs;
  for (int y = ya; y <= yb; ++y) {
    const double yc = y + 0.5;
    xs.clear();
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Point& a = poly[i];
      const Point& b = poly[(i + 1) % poly.size()];
      if ((a.y <= yc && yc < b.y) || (b.y <= yc && yc < a.y))
        xs.push_back(a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y));
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
      const int xa = std::max(clip.x0, static_cast<int>(std::ceil(xs[i] - 0.5)));
      const int xb = std::min(clip.x1, static_cast<int>(std::ceil(xs[i + 1] - 0.5)));
      for (int x = xa; x < xb; ++x) img.at(x, y) = v;
    }
  }
}

void fill_disc(PanelImage& img, const PixelRect& clip, Point c, double r, std::uint8_t v) {
  if (r <= 0) return;
  const int ya = std::max(clip.y0, static_cast<int>(std::floor(c.y - r)));
  const int yb = std::min(clip.y1 - 1, static_cast<int>(std::ceil(c.y + r)));
  const int xa = std::max(clip.x0, static_cast<int>(std::floor(c.x - r)));
  const int xb = std::min(clip.x1 - 1, static_cast<int>(std::ceil(c.x + r)));
  for (int y = ya; y <= yb; ++y)
    for (int x = xa; x <= xb; ++x) {
      const double dx = x + 0.5 - c.x, dy = y + 0.5 - c.y;
      if (dx * dx + dy * dy <= r * r) img.at(x, y) = v;
    }
}

/// Marks pixels whose centre lies within `half_width` of segment ab. A half-width of at
/// least sqrt(2)/2 keeps the stroke 4-connected, so sharp tips never detach.
void stroke_segment(PanelImage& img, const PixelRect& clip, Point a, Point b, double half_width, std::uint8_t v) {
  const int ya = std::max(clip.y0, static_cast<int>(std::floor(std::min(a.y, b.y) - half_width)));
  const int yb = std::min(clip.y1 - 1, static_cast<int>(std::ceil(std::max(a.y, b.y) + half_width)));
  const int xa = std::max(clip.x0, static_cast<int>(std::floor(std::min(a.x, b.x) - half_width)));
  const int xb = std::min(clip.x1 - 1, static_cast<int>(std::ceil(std::max(a.x, b.x) + half_width)));
  const double ex = b.x - a.x, ey = b.y - a.y, len2 = ex * ex + ey * ey;
  for (int y = ya; y <= yb; ++y)
    for (int x = xa; x <= xb; ++x) {
      const double px = x + 0.5 - a.x, py = y + 0.5 - a.y;
      const double t = len2 > 0 ? std::clamp((px * ex + py * ey) / len2, 0.0, 1.0) : 0.0;
      const double dx = px - t * ex, dy = py - t * ey;
      if (dx * dx + dy * dy <= half_width * half_width) img.at(x, y) = v;
    }
}

std::vector<Point> regular_polygon(Point c, double radius, int sides, double rotation_deg) {
  // Odd polygons point up, even ones sit on a flat edge at zero rotation.
  const double start = -90.0 + (sides % 2 == 0 ? 180.0 / sides : 0.0) + rotation_deg;
  std::vector<Point> pts;
  for (int k = 0; k < sides; ++k) {
    const double a = (start + 360.0 * k / sides) * std::numbers::pi / 180.0;
    pts.push_back({c.x + radius * std::cos(a), c.y + radius * std::sin(a)});
  }
  return pts;
}

void draw_entity(PanelImage& img, const PixelRect& cell, const Entity& e) {
  const Point c{(cell.x0 + cell.x1) / 2.0, (cell.y0 + cell.y1) / 2.0};
  const double side = std::min(cell.x1 - cell.x0, cell.y1 - cell.y0);
  const double radius = kSizeValues.at(static_cast<std::size_t>(e.size)) * side / 2.0;
  const auto fill = static_cast<std::uint8_t>(kColorValues.at(static_cast<std::size_t>(e.color)));
  const double rotation = kOrientationValues.at(static_cast<std::size_t>(e.angle));
  const int sides = type_sides(e.type);
  if (sides == 0) {
    fill_disc(img, cell, c, radius, kInk);
    fill_disc(img, cell, c, radius - kStroke, fill);
    return;
  }
  // Inset by the stroke width measured perpendicular to the edges.
  const double inner = radius - kStroke / std::cos(std::numbers::pi / sides);
  const auto outline = regular_polygon(c, radius, sides, rotation);
  fill_polygon(img, cell, outline, kInk);
  for (std::size_t i = 0; i < outline.size(); ++i)
    stroke_segment(img, cell, outline[i], outline[(i + 1) % outline.size()], 0.75, kInk);
  if (inner > 0) fill_polygon(img, cell, regular_polygon(c, inner, sides, rotation), fill);
}

void blit(PanelImage& dst, const PanelImage& src, int x, int y) {
  for (int r = 0; r < src.height; ++r)
    std::memcpy(&dst.at(x, y + r), &src.pixels[static_cast<std::size_t>(r) * static_cast<std::size_t>(src.width)],
                static_cast<std::size_t>(src.width));
}

void append_bytes(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

struct ReadCursor {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;
};

void read_bytes(png_structp png, png_bytep data, png_size_t length) {
  auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cur->pos + length > cur->bytes.size()) png_error(png, "truncated PNG");
  std::memcpy(data, cur->bytes.data() + cur->pos, length);
  cur->pos += length;
}

[[noreturn]] void png_fail(png_structp, png_const_charp msg) { throw IoError(std::string("PNG: ") + msg); }
void png_warn(png_structp, png_const_charp) {}

}  // namespace

PixelRect slot_pixels(const Rect& slot, int size) {
  auto px = [size](double v) { return static_cast<int>(std::lround(v * size)); };
  return {px(slot.x), px(slot.y), px(slot.x + slot.w), px(slot.y + slot.h)};
}

PanelImage render_panel(const PanelState& panel, int size) {
  PanelImage img(size, size);
  const auto& spec = configuration_spec(panel.config);
  for (std::size_t c = 0; c < panel.components.size() && c < spec.components.size(); ++c) {
    for (const Entity& e : panel.components[c].entities) {
      const Rect& slot = spec.components[c].slots.at(static_cast<std::size_t>(e.slot));
      draw_entity(img, slot_pixels(slot, size), e);
    }
  }
  return img;
}

int sheet_width() { return kSheetWidth; }
int sheet_height() { return kSheetHeight; }

std::pair<int, int> sheet_panel_origin(int k) {
  if (k < kContextPanels) {
    return {kMatrixX + (k % 3) * (kPanelSize + kGap), kMatrixY + (k / 3) * (kPanelSize + kGap)};
  }
  const int i = k - kContextPanels;
  return {kGap + (i % kStripColumns) * (kPanelSize + kGap),
          kStripY + (i / kStripColumns) * (kPanelSize + kLabelBand)};
}

std::pair<int, int> sheet_question_origin() {
  return {kMatrixX + 2 * (kPanelSize + kGap), kMatrixY + 2 * (kPanelSize + kGap)};
}

std::vector<PanelImage> render_problem_panels(const Problem& problem) {
  std::vector<PanelImage> out;
  out.reserve(kContextPanels + kCandidateCount);
  for (const auto& p : problem.context) out.push_back(render_panel(p));
  for (const auto& p : problem.candidates) out.push_back(render_panel(p));
  return out;
}

PanelImage render_sheet(const Problem& problem) {
  PanelImage sheet(kSheetWidth, kSheetHeight);
  const auto panels = render_problem_panels(problem);
  for (int k = 0; k < kContextPanels + kCandidateCount; ++k) {
    const auto [x, y] = sheet_panel_origin(k);
    blit(sheet, panels[static_cast<std::size_t>(k)], x, y);
    frame(sheet, x, y, kPanelSize, kPanelSize);
    if (k >= kContextPanels) {
      constexpr int scale = 2;
      draw_glyph(sheet, kDigits[static_cast<std::size_t>(k - kContextPanels)],
                 x + (kPanelSize - 5 * scale) / 2, y + kPanelSize + 5, scale);
    }
  }
  const auto [qx, qy] = sheet_question_origin();
  frame(sheet, qx, qy, kPanelSize, kPanelSize);
  constexpr int qscale = 12;
  draw_glyph(sheet, kQuestion, qx + (kPanelSize - 5 * qscale) / 2, qy + (kPanelSize - 7 * qscale) / 2,
             qscale);
  fill_rect(sheet, kGap, kSeparatorY, kSheetWidth - kGap, kSeparatorY + 2, kInk);
  return sheet;
}

std::vector<std::uint8_t> encode_png(const PanelImage& image) {
  std::vector<std::uint8_t> out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_fail, png_warn);
  if (!png) throw IoError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  try {
    if (!info) throw IoError("png_create_info_struct failed");
    png_set_write_fn(png, &out, append_bytes, nullptr);
    png_set_compression_level(png, 6);
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < image.height; ++y)
      png_write_row(png, &image.pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(image.width)]);
    png_write_end(png, nullptr);
  } catch (...) {
    png_destroy_write_struct(&png, &info);
    throw;
  }
  png_destroy_write_struct(&png, &info);
  return out;
}

PanelImage decode_png(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) throw IoError("not a PNG stream");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_fail, png_warn);
  if (!png) throw IoError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  ReadCursor cursor{bytes, 0};
  PanelImage img;
  try {
    if (!info) throw IoError("png_create_info_struct failed");
    png_set_read_fn(png, &cursor, read_bytes);
    png_read_info(png, info);
    if (png_get_color_type(png, info) != PNG_COLOR_TYPE_GRAY || png_get_bit_depth(png, info) != 8)
      throw IoError("expected an 8-bit grayscale PNG");
    img = PanelImage(static_cast<int>(png_get_image_width(png, info)),
                     static_cast<int>(png_get_image_height(png, info)));
    for (int y = 0; y < img.height; ++y)
      png_read_row(png, &img.pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(img.width)], nullptr);
  } catch (...) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw;
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

void write_png(const PanelImage& image, const std::filesystem::path& path) {
  const auto bytes = encode_png(image);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("failed writing " + path.string());
}

}  // namespace raven
