#include "exset/grid_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "exset/error.hpp"

namespace exset {

namespace {

void put_le(std::string& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::uint64_t uint(int width, const char* what) {
    if (bytes_.size() - pos_ < static_cast<std::size_t>(width) || pos_ > bytes_.size())
      throw GridFormatError(std::string("truncated ") + what, pos_);
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += width;
    return v;
  }
  double f64(const char* what) { return std::bit_cast<double>(uint(8, what)); }
  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::string_view bytes() const { return bytes_; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_grid(const FieldRealization& field) {
  const auto& w = field.window();
  std::string out = "XGRD";
  out.reserve(16 + 16 * w.dims.size() + 8 * field.values().size());
  put_le(out, kXgrdVersion, 2);
  put_le(out, static_cast<std::uint64_t>(w.dims.size()), 1);
  for (auto n : w.dims) put_le(out, n, 8);
  for (std::size_t k = 0; k < w.dims.size(); ++k) put_le(out, std::bit_cast<std::uint64_t>(w.spacing), 8);
  for (double v : field.values()) put_le(out, std::bit_cast<std::uint64_t>(v), 8);
  return out;
}

FieldRealization decode_grid(std::string_view bytes) {
  if (bytes.size() < 4 || bytes.substr(0, 4) != "XGRD") throw GridFormatError("bad magic", 0);
  Reader r(bytes.substr(0));
  r.uint(4, "magic");
  const std::size_t version_at = r.pos();
  const auto version = r.uint(2, "version");
  if (version != kXgrdVersion)
    throw GridFormatError("unsupported version " + std::to_string(version), version_at);
  const std::size_t dim_at = r.pos();
  const auto d = r.uint(1, "dimension");
  if (d < 1 || d > 3) throw GridFormatError("dimension " + std::to_string(d) + " not in 1..3", dim_at);

  std::vector<std::size_t> dims;
  std::uint64_t count = 1;
  for (std::uint64_t k = 0; k < d; ++k) {
    const std::size_t at = r.pos();
    const auto n = r.uint(8, "dims");
    if (n == 0) throw GridFormatError("zero-length axis", at);
    if (count > std::numeric_limits<std::uint64_t>::max() / n / 8)
      throw GridFormatError("dimension overflow", at);
    count *= n;
    dims.push_back(static_cast<std::size_t>(n));
  }
  double spacing = 0.0;
  for (std::uint64_t k = 0; k < d; ++k) {
    const std::size_t at = r.pos();
    const double h = r.f64("spacing");
    if (!(h > 0.0) || !std::isfinite(h)) throw GridFormatError("spacing must be positive", at);
    if (k == 0) spacing = h;
    else if (h != spacing) throw GridFormatError("unequal axis spacing is unsupported", at);
  }
  if (r.remaining() < count * 8) throw GridFormatError("truncated payload", bytes.size());
  if (r.remaining() > count * 8) throw GridFormatError("trailing bytes after payload", r.pos() + count * 8);
  std::vector<double> values(count);
  for (auto& v : values) v = r.f64("payload");
  return FieldRealization(GridWindow(std::move(dims), spacing), std::move(values));
}

void write_grid(const FieldRealization& field, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  const auto bytes = encode_grid(field);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

FieldRealization read_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return decode_grid(ss.str());
}

}  // namespace exset
