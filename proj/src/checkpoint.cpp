#include "qshyp/checkpoint.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "qshyp/errors.hpp"

namespace qshyp {

namespace {

constexpr char kMagic[6] = {'Q', 'S', 'H', 'Y', 'P', '1'};

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_f64(std::vector<unsigned char>& out, double x) {
  const auto v = std::bit_cast<std::uint64_t>(x);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

class Reader {
 public:
  Reader(const std::vector<unsigned char>& b, std::string source) : b_(b), source_(std::move(source)) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
    pos_ += 4;
    return v;
  }

  double f64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(v);
  }

 private:
  void need(std::size_t k) const {
    if (pos_ + k > b_.size())
      throw CheckpointError(source_ + ": truncated header (expected at least " + std::to_string(kCheckpointHeaderBytes) +
                            " bytes, got " + std::to_string(b_.size()) + ")");
  }

  const std::vector<unsigned char>& b_;
  std::string source_;
  std::size_t pos_ = 6;
};

}  // namespace

std::vector<unsigned char> checkpoint_encode(const SpectralState& s) {
  const std::size_t np = s.grid.points();
  std::vector<unsigned char> out;
  out.reserve(kCheckpointHeaderBytes + 13 * np * 8);
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<std::uint32_t>(s.grid.n()));
  put_u32(out, static_cast<std::uint32_t>(s.grid.dims()));
  put_f64(out, s.t);
  for (double x : {s.params.a, s.params.b, s.params.c, s.params.lambda, s.params.q, s.params.growth_const}) put_f64(out, x);
  put_u32(out, kBasisId);
  auto put_field = [&](const Real& f) {
    if (f.size() != np) throw CheckpointError("checkpoint: field size does not match the grid");
    for (double x : f) put_f64(out, x);
  };
  for (const auto& c : s.v) put_field(c);
  for (const auto& c : s.q) put_field(c);
  for (const auto& c : s.p) put_field(c);
  return out;
}

SpectralState checkpoint_decode(const std::vector<unsigned char>& b, const std::string& source) {
  if (b.size() < sizeof kMagic || std::memcmp(b.data(), kMagic, sizeof kMagic) != 0)
    throw CheckpointError(source + ": not a checkpoint (bad magic)");
  Reader r(b, source);
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion)
    throw CheckpointError(source + ": unsupported format version " + std::to_string(version) + " (expected " +
                          std::to_string(kCheckpointVersion) + ")");
  const std::uint32_t n = r.u32();
  const std::uint32_t dims = r.u32();
  const double t = r.f64();
  PotentialParams p;
  p.a = r.f64();
  p.b = r.f64();
  p.c = r.f64();
  p.lambda = r.f64();
  p.q = r.f64();
  p.growth_const = r.f64();
  const std::uint32_t basis = r.u32();
  if (basis != kBasisId)
    throw CheckpointError(source + ": tensor basis id " + std::to_string(basis) + " does not match " +
                          std::to_string(kBasisId));
  if (n < 8 || n % 2 != 0 || n > 4096 || (dims != 2 && dims != 3))
    throw CheckpointError(source + ": corrupt header (n = " + std::to_string(n) + ", dims = " + std::to_string(dims) + ")");
  const Grid g(static_cast<int>(n), static_cast<int>(dims));
  const std::size_t np = g.points();
  const std::size_t expected = kCheckpointHeaderBytes + 13 * np * 8;
  if (b.size() != expected)
    throw CheckpointError(source + ": payload size mismatch (expected " + std::to_string(expected) + " bytes, got " +
                          std::to_string(b.size()) + ")");

  SpectralState s = SpectralState::zero(g, p);
  s.t = t;
  std::size_t pos = kCheckpointHeaderBytes;
  auto get_field = [&](Real& f) {
    for (std::size_t i = 0; i < np; ++i, pos += 8) {
      std::uint64_t v = 0;
      for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(b[pos + static_cast<std::size_t>(k)]) << (8 * k);
      f[i] = std::bit_cast<double>(v);
    }
  };
  for (auto& c : s.v) get_field(c);
  for (auto& c : s.q) get_field(c);
  for (auto& c : s.p) get_field(c);
  return s;
}

void write_file_atomic(const std::string& path, const std::string& bytes) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error(path + ": cannot open for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    f.flush();
    if (!f) throw std::runtime_error(path + ": write failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error(path + ": cannot move temporary file into place");
  }
}

void checkpoint_save(const SpectralState& s, const std::string& path) {
  const auto bytes = checkpoint_encode(s);
  try {
    write_file_atomic(path, std::string(bytes.begin(), bytes.end()));
  } catch (const std::runtime_error& e) {
    throw CheckpointError(e.what());
  }
}

SpectralState checkpoint_load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CheckpointError(path + ": cannot open checkpoint");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return checkpoint_decode(bytes, path);
}

}  // namespace qshyp
