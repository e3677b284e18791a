// SPDX-License-Identifier: Apache-2.0
#include "tdfsi/cache.hpp"

#include <array>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "tdfsi/error.hpp"

namespace tdfsi
{

namespace fs = std::filesystem;

namespace
{

constexpr char kMagic[8] = {'T', 'D', 'F', 'S', 'I', 'M', 'A', 'T'};

#pragma pack(push, 1)
struct Header
{
  char magic[8];
  std::uint32_t version;
  std::uint32_t family;
  std::int32_t n;
  std::int32_t lag;
  double dt;
  std::uint64_t hash;
  std::int64_t rows;
  std::int64_t cols;
};
#pragma pack(pop)
static_assert(sizeof(Header) == 56, "cache header layout");

std::string hex64(std::uint64_t v)
{
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string cache_directory(const std::string &root, int n, double dt, std::uint64_t hash)
{
  std::uint64_t bits;
  std::memcpy(&bits, &dt, sizeof(bits));
  return (fs::path(root) / ("n" + std::to_string(n) + "_dt" + hex64(bits) + "_q" + hex64(hash)))
    .string();
}

std::string cache_path(const std::string &root, const CacheKey &key)
{
  char name[32];
  std::snprintf(name, sizeof(name), "%s_%04d.bin", family_name(key.family), key.lag);
  return (fs::path(cache_directory(root, key.n, key.dt, key.hash)) / name).string();
}

bool load_cached(const std::string &root, const CacheKey &key, int rows, DenseMatrix &out)
{
  const std::string path = cache_path(root, key);
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    return false;
  }
  Header h{};
  in.read(reinterpret_cast<char *>(&h), sizeof(h));
  if (!in || std::memcmp(h.magic, kMagic, sizeof(kMagic)) != 0)
  {
    raise(ErrorCode::Io, "corrupt cache file " + path);
  }
  if (h.version != kCacheVersion || h.family != static_cast<std::uint32_t>(key.family) ||
      h.n != key.n || h.lag != key.lag || h.dt != key.dt || h.hash != key.hash ||
      h.rows != rows || h.cols != rows)
  {
    raise(ErrorCode::Io, "cache header mismatch in " + path);
  }
  out.resize(rows, rows);
  in.read(reinterpret_cast<char *>(out.data()),
          static_cast<std::streamsize>(sizeof(double) * out.size()));
  if (!in)
  {
    raise(ErrorCode::Io, "truncated cache file " + path);
  }
  return true;
}

void store_cached(const std::string &root, const CacheKey &key, const DenseMatrix &m)
{
  const fs::path path = cache_path(root, key);
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec)
  {
    raise(ErrorCode::Io, "cannot create cache directory " + path.parent_path().string());
  }
  Header h{};
  std::memcpy(h.magic, kMagic, sizeof(kMagic));
  h.version = kCacheVersion;
  h.family = static_cast<std::uint32_t>(key.family);
  h.n = key.n;
  h.lag = key.lag;
  h.dt = key.dt;
  h.hash = key.hash;
  h.rows = m.rows();
  h.cols = m.cols();
  // Write then rename so a concurrent reader never sees a partial file.
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char *>(&h), sizeof(h));
    out.write(reinterpret_cast<const char *>(m.data()),
              static_cast<std::streamsize>(sizeof(double) * m.size()));
    if (!out)
    {
      raise(ErrorCode::Io, "failed writing cache file " + tmp.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec)
  {
    raise(ErrorCode::Io, "failed renaming cache file " + path.string());
  }
}

RetardedMatrixSequence cached_sequence(const VolumeMesh &mesh, const SurfaceMesh &surf,
                                       double dt, int num_steps, const BemOptions &opt,
                                       const std::string &root, CacheStats *cstats,
                                       AssemblyStats *stats, const ProgressFn &progress)
{
  if (root.empty())
  {
    return assemble_sequence(mesh, surf, dt, num_steps, opt, stats, progress);
  }
  if (num_steps < 1)
  {
    raise(ErrorCode::InvalidArgument, "cached_sequence: need at least one time step");
  }
  const int ns = surf.num_nodes();
  const int nlag = std::min(num_steps, causal_lag_count(surface_diameter(mesh, surf), dt));
  const std::uint64_t hash = opt.hash();
  constexpr std::array<Family, 4> fams = {Family::V, Family::K, Family::KT, Family::W};

  RetardedMatrixSequence seq;
  seq.dt = dt;
  seq.count = num_steps;
  seq.num_nodes = ns;
  for (Family f : fams)
  {
    seq.family(f).resize(nlag);
  }

  // Lags are loaded until the first one with any family missing; the rest is
  // assembled in one pass and written back.
  int first_missing = nlag;
  for (int k = 0; k < nlag && first_missing == nlag; ++k)
  {
    for (Family f : fams)
    {
      if (!load_cached(root, CacheKey{mesh.n, dt, f, k, hash}, ns, seq.family(f)[k]))
      {
        first_missing = k;
        break;
      }
    }
  }
  if (cstats)
  {
    cstats->hits += 4 * first_missing;
    cstats->misses += 4 * (nlag - first_missing);
  }
  if (first_missing < nlag)
  {
    auto lags = assemble_lags(mesh, surf, dt, first_missing, nlag, opt, stats, progress);
    for (int k = first_missing; k < nlag; ++k)
    {
      for (Family f : fams)
      {
        auto &m = lags[k - first_missing][static_cast<int>(f)];
        store_cached(root, CacheKey{mesh.n, dt, f, k, hash}, m);
        seq.family(f)[k] = std::move(m);
      }
    }
  }
  return seq;
}

}  // namespace tdfsi
