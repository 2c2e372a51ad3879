#include <bit>
#include <cmath>
#include <cstring>

#include "movai/error.hpp"
#include "movai/pvr.hpp"
#include "movai/render.hpp"

namespace movai {
namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& b) : bytes_(b) {}

  std::size_t offset() const { return at_; }

  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[at_ + static_cast<std::size_t>(i)]) << (8 * i);
    at_ += 4;
    return v;
  }

  double f64() {
    need(8, "truncated parameter payload");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[at_ + static_cast<std::size_t>(i)]) << (8 * i);
    const double d = std::bit_cast<double>(v);
    if (!std::isfinite(d)) throw FormatError(at_, "non-finite parameter");
    at_ += 8;
    return d;
  }

 private:
  void need(std::size_t n, const char* what) const {
    if (bytes_.size() - at_ < n) throw FormatError(bytes_.size(), what);
  }

  const std::vector<std::uint8_t>& bytes_;
  std::size_t at_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_model(const ModelParams& params) {
  std::vector<std::uint8_t> out{'M', 'V', 'A', 'I'};
  put_u32(out, kModelVersion);
  put_u32(out, static_cast<std::uint32_t>(params.levels.size()));
  for (const auto& lp : params.levels) {
    put_u32(out, static_cast<std::uint32_t>(params.config.patch));
    put_u32(out, static_cast<std::uint32_t>(params.config.channels));
    put_u32(out, static_cast<std::uint32_t>(params.config.d_model));
    put_u32(out, static_cast<std::uint32_t>(lp.attention.heads));
    const Tensor flat = flatten(lp);
    for (double d : flat.values()) put_f64(out, d);
  }
  return out;
}

ModelParams decode_model(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4) throw FormatError(bytes.size(), "truncated magic");
  if (std::memcmp(bytes.data(), "MVAI", 4) != 0) throw FormatError(0, "magic");
  Reader in(bytes);
  in.u32("truncated magic");
  const std::size_t version_at = in.offset();
  if (in.u32("truncated version") != kModelVersion) throw FormatError(version_at, "unsupported version");
  const std::size_t count_at = in.offset();
  const std::uint32_t levels = in.u32("truncated level count");
  if (levels == 0 || levels > 16) throw FormatError(count_at, "implausible level count");

  ModelParams params;
  for (std::uint32_t l = 0; l < levels; ++l) {
    const std::size_t header_at = in.offset();
    ModelConfig cfg;
    cfg.patch = in.u32("truncated level header");
    cfg.channels = in.u32("truncated level header");
    cfg.d_model = in.u32("truncated level header");
    cfg.heads = in.u32("truncated level header");
    cfg.levels = levels;
    if (cfg.patch == 0 || cfg.patch > 64) throw FormatError(header_at, "implausible patch size");
    if (cfg.channels == 0 || cfg.channels > 4) throw FormatError(header_at + 4, "implausible channel count");
    if (cfg.d_model == 0 || cfg.d_model > 1024) throw FormatError(header_at + 8, "implausible d_model");
    if (cfg.heads == 0 || cfg.d_model % cfg.heads != 0) throw FormatError(header_at + 12, "heads must divide d_model");
    if (l == 0) {
      params.config = cfg;
    } else if (!(cfg == params.config)) {
      throw FormatError(header_at, "level dimensions differ from level 0");
    }
    LevelParams lp;
    const std::size_t d = cfg.d_model, p = cfg.patch_dim();
    lp.encode = Tensor({p, d});
    lp.decode = Tensor({d, p});
    lp.attention.heads = cfg.heads;
    for (Projections* pr : {&lp.attention.spatial, &lp.attention.temporal, &lp.attention.cross}) {
      pr->wq = Tensor({d, d});
      pr->wk = Tensor({d, d});
      pr->wv = Tensor({d, d});
    }
    Tensor flat = flatten(lp);
    for (double& x : flat.values()) x = in.f64();
    unflatten(flat, lp);
    params.levels.push_back(std::move(lp));
  }
  if (in.offset() != bytes.size()) throw FormatError(in.offset(), "trailing bytes");
  return params;
}

void save_model(const ModelParams& params, const std::filesystem::path& path) {
  write_file(path, encode_model(params));
}

ModelParams load_model(const std::filesystem::path& path) { return decode_model(read_file(path)); }

}  // namespace movai
