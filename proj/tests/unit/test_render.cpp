#include <doctest.h>

#include <zlib.h>

#include <array>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "exprog/render.hpp"
#include "exprog/world_io.hpp"
#include "helpers.hpp"

using namespace exprog;
using testing::object;
using testing::scene;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = EXPROG_FIXTURES;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::uint32_t crc_bytes(const std::string& s) {
  std::array<std::uint32_t, 256> table{};
  for (std::uint32_t n = 0; n < 256; ++n) {
    std::uint32_t c = n;
    for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
    table[n] = c;
  }
  std::uint32_t c = 0xffffffffu;
  for (unsigned char b : s) c = table[(c ^ b) & 0xff] ^ (c >> 8);
  return c ^ 0xffffffffu;
}

std::uint32_t be32(const std::string& s, std::size_t at) {
  return (std::uint32_t(std::uint8_t(s[at])) << 24) | (std::uint32_t(std::uint8_t(s[at + 1])) << 16) |
         (std::uint32_t(std::uint8_t(s[at + 2])) << 8) | std::uint32_t(std::uint8_t(s[at + 3]));
}

struct Decoded {
  int width = 0, height = 0;
  std::vector<std::uint8_t> rgb;
  std::vector<std::string> chunks;
};

// Minimal PNG reader: 8-bit RGB, every filter type.
Decoded decode_png(const std::string& png) {
  Decoded d;
  REQUIRE(png.substr(0, 8) == std::string("\x89PNG\r\n\x1a\n", 8));
  std::string idat;
  std::size_t at = 8;
  while (at < png.size()) {
    const auto len = be32(png, at);
    const std::string type = png.substr(at + 4, 4);
    const std::string data = png.substr(at + 8, len);
    CHECK(be32(png, at + 8 + len) == crc_bytes(type + data));
    d.chunks.push_back(type);
    if (type == "IHDR") {
      d.width = static_cast<int>(be32(data, 0));
      d.height = static_cast<int>(be32(data, 4));
      CHECK(data[8] == 8);
      CHECK(data[9] == 2);
    } else if (type == "IDAT") {
      idat += data;
    }
    at += 12 + len;
  }
  const std::size_t stride = static_cast<std::size_t>(d.width) * 3;
  std::vector<std::uint8_t> raw((stride + 1) * static_cast<std::size_t>(d.height));
  uLongf raw_len = raw.size();
  REQUIRE(uncompress(raw.data(), &raw_len, reinterpret_cast<const Bytef*>(idat.data()), idat.size()) == Z_OK);
  REQUIRE(raw_len == raw.size());
  d.rgb.resize(stride * static_cast<std::size_t>(d.height));
  for (int y = 0; y < d.height; ++y) {
    const std::uint8_t f = raw[y * (stride + 1)];
    const std::uint8_t* in = &raw[y * (stride + 1) + 1];
    std::uint8_t* out = &d.rgb[y * stride];
    const std::uint8_t* up = y ? &d.rgb[(y - 1) * stride] : nullptr;
    for (std::size_t i = 0; i < stride; ++i) {
      const int a = i >= 3 ? out[i - 3] : 0, b = up ? up[i] : 0, c = (up && i >= 3) ? up[i - 3] : 0;
      int pred = 0;
      switch (f) {
        case 0: pred = 0; break;
        case 1: pred = a; break;
        case 2: pred = b; break;
        case 3: pred = (a + b) / 2; break;
        case 4: {
          const int p = a + b - c, pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
          pred = (pa <= pb && pa <= pc) ? a : pb <= pc ? b : c;
          break;
        }
        default: FAIL("bad filter");
      }
      out[i] = static_cast<std::uint8_t>(in[i] + pred);
    }
  }
  return d;
}

WorldState fixture_scene() {
  return scene({object(0, Shape::circle(0.05), Color::Red, 0.3, 0.3),
                object(1, Shape::box(0.1, 0.06), Color::Blue, 0.7, 0.7, 0.5),
                object(2, Shape::triangle(0.1), Color::Green, 0.2, 0.8)},
               {0.5, 0.1});
}

}  // namespace

TEST_CASE("base64 test vectors") {
  CHECK(base64_encode("") == "");
  CHECK(base64_encode("f") == "Zg==");
  CHECK(base64_encode("fo") == "Zm8=");
  CHECK(base64_encode("foo") == "Zm9v");
  CHECK(base64_encode("foob") == "Zm9vYg==");
  CHECK(base64_encode("fooba") == "Zm9vYmE=");
  CHECK(base64_encode("foobar") == "Zm9vYmFy");
}

TEST_CASE("png round trip through an independent decoder") {
  Image img(5, 3);
  img.set(0, 0, {1, 2, 3});
  img.set(4, 2, {250, 0, 7});
  img.set(2, 1, {9, 9, 9});
  const auto d = decode_png(encode_png(img));
  CHECK(d.width == 5);
  CHECK(d.height == 3);
  CHECK(d.chunks == std::vector<std::string>{"IHDR", "IDAT", "IEND"});
  CHECK(d.rgb == img.rgb);

  const auto w = fixture_scene();
  const auto r = rasterize(w, World{}, 64);
  const auto back = decode_png(encode_png(r));
  CHECK(back.rgb == r.rgb);
}

TEST_CASE("raster agrees with point-in-shape") {
  const auto w = fixture_scene();
  const int n = 128;
  const auto img = rasterize(w, World{}, n);
  int checked = 0;
  for (int py = 0; py < n; ++py) {
    for (int px = 0; px < n; ++px) {
      const Vec2 p{(px + 0.5) / n, 1.0 - (py + 0.5) / n};
      for (const auto& o : w.objects) {
        // Skip pixels near the outline where sampling rules may differ.
        bool inside_all = true, inside_any = false;
        for (double dx : {-0.6, 0.6}) {
          for (double dy : {-0.6, 0.6}) {
            const bool in = testing::point_in_object({p.x + dx / n, p.y + dy / n}, o);
            inside_all = inside_all && in;
            inside_any = inside_any || in;
          }
        }
        if (inside_all) {
          CHECK(img.at(px, py) == color_rgb(o.color));
          ++checked;
        } else if (!inside_any && testing::point_in_object(p, o)) {
          FAIL("inconsistent oracle");
        }
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("svg output") {
  const World world;
  SUBCASE("golden frame") {
    CHECK(frame_svg(fixture_scene(), world, 7, 200) == slurp(kFixtures / "golden_frame.svg"));
  }
  SUBCASE("distinct colors") {
    std::set<std::string> hex;
    for (int c = 0; c < kColorCount; ++c) hex.insert(color_hex(static_cast<Color>(c)));
    CHECK(hex.size() == kColorCount);
  }
  SUBCASE("frame selection") {
    CHECK(frame_indices(101, 10).size() == 11);
    CHECK(frame_indices(0, 10).empty());
    CHECK(frame_indices(5, 0) == std::vector<std::size_t>{0, 1, 2, 3, 4});
  }
}

TEST_CASE("render_trace") {
  const World world;
  const auto dir = fs::temp_directory_path() / "exprog_render_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  SUBCASE("empty trace") {
    Trajectory empty;
    empty.terminal = fixture_scene();
    CHECK_THROWS_AS(render_trace(empty, world, 10, dir), RenderError);
  }
  SUBCASE("100 frames at stride 10") {
    std::vector<Action> hold(100, Action{{0.5, 0.1}, false});
    const auto tau = world.rollout(fixture_scene(), hold);
    const auto files = render_trace(tau, world, 10, dir);
    CHECK(files.frames.size() == 11);
    CHECK(files.frames.back().filename() == "frame_0100.svg");
    std::size_t on_disk = 0;
    for (const auto& e : fs::directory_iterator(dir)) on_disk += e.path().extension() == ".svg";
    CHECK(on_disk == 12);
    CHECK(slurp(files.summary).find("<polyline") != std::string::npos);
  }
  SUBCASE("fixture trace") {
    const auto tau = trajectory_from_json(read_json_file(kFixtures / "trace_small.json"));
    const auto files = render_trace(tau, world, 2, dir, false);
    CHECK(files.frames.size() == 4);
    CHECK(files.summary.empty());
  }
  fs::remove_all(dir);
}
